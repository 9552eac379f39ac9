#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "bai/algorithms.hpp"
#include "bai/core_model.hpp"
#include "bai/generators.hpp"
#include "json.hpp"

namespace bai {

enum class OutputFormat { kCsv, kJson, kBoth };

[[nodiscard]] std::string_view to_string(OutputFormat format);
[[nodiscard]] OutputFormat parse_output_format(std::string_view name);

using InstanceSource = std::variant<std::filesystem::path, InstanceSpec>;

struct ExperimentConfig {
  InstanceSource instance = InstanceSpec{};
  std::vector<Algorithm> algorithms;
  std::vector<double> deltas{0.01};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool permute = true;
  std::uint64_t budget_cap = kDefaultBudgetCap;
  unsigned threads = 1;
  AlgorithmParams params;
  std::filesystem::path out = "results";
  OutputFormat format = OutputFormat::kBoth;

  // Throws ConfigError: trials >= 1, deltas in (0, 0.5], at least one
  // algorithm, threads >= 1, budget_cap >= 1. Deltas above 0.1 are accepted
  // with a warning on stderr.
  void validate() const;
  [[nodiscard]] BanditInstance load_instance() const;
  // Canonical JSON of everything that determines the results (thread count
  // and output location excluded).
  [[nodiscard]] nlohmann::json reproducible_json() const;
  // FNV-1a 64 of reproducible_json().dump(), as 16 hex digits.
  [[nodiscard]] std::string hash() const;
};

// Reads the experiment JSON schema
// {"instance": <file path or generator spec>, "algorithms": [...], "deltas": [...],
//  "trials": int, "seed": int, "permute": bool, "budget_cap": int, "threads": int}
// plus optional "epsilon" (median-elim accuracy), "pull_constant", "out" and
// "format". Relative instance paths resolve against the config file's folder.
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& doc,
                                                const std::filesystem::path& base_dir = {});

struct TrialSummary {
  std::string instance;
  std::string algorithm;
  double delta = 0.0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  std::size_t aborts = 0;
  double error_rate = 0.0;
  double ci95 = 0.0;
  double mean_samples = 0.0;
  double std_samples = 0.0;
  std::uint64_t min_samples = 0;
  std::uint64_t max_samples = 0;
  double total_weight = 0.0;
  double entropy_nats = 0.0;
  double mt_bound = 0.0;
  double kks_bound = 0.0;
  double conjectured_bound = 0.0;
  double bound_ratio = 0.0;
  // Trials whose elimination trace dropped the best arm in some round.
  std::size_t survival_failures = 0;
  bool heuristic = false;
  // selected_counts[i]: trials that returned arm index i.
  std::vector<std::size_t> selected_counts;

  [[nodiscard]] std::size_t correct() const { return trials - errors - aborts; }
  // error_rate <= delta + 3 sqrt(delta (1 - delta) / trials).
  [[nodiscard]] bool meets_delta() const;
};

// A strategy as seen by the harness: drives the oracle and may consult the
// (possibly permuted) true instance.
using TrialAlgorithm =
    std::function<BaiResult(SampleOracle& oracle, const BanditInstance& truth, double delta)>;

struct TrialOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool permute = true;
  std::uint64_t budget_cap = kDefaultBudgetCap;
  unsigned threads = 1;
};

// Runs `trials` independent trials. Trial t uses seed mix_seed(seed, t); with
// permutation on, arms are shuffled by a permutation drawn from that seed.
// Results are reduced in trial order, so they do not depend on `threads`.
[[nodiscard]] TrialSummary run_trials(const BanditInstance& instance, const std::string& name,
                                      const TrialAlgorithm& algorithm, double delta,
                                      const TrialOptions& options);

// One summary per (algorithm, delta), deltas outermost.
[[nodiscard]] std::vector<TrialSummary> run_trials(const ExperimentConfig& config);

struct ComparisonTable {
  std::vector<TrialSummary> rows;
  // Per delta: algorithms meeting the delta-correctness tolerance, by
  // ascending mean_samples.
  std::vector<std::pair<double, std::vector<std::string>>> ranking;
};

// Requires at least two algorithms; all algorithms see identical trial seeds
// and permutations.
[[nodiscard]] ComparisonTable compare_suite(const ExperimentConfig& config);

struct ProbeRow {
  int m = 0;
  double entropy_nats = 0.0;
  double total_weight = 0.0;
  double mean_samples = 0.0;
  double bound_ratio = 0.0;
  TrialSummary summary;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  double ratio_spread = 0.0;  // max / min bound_ratio over rows
};

// Runs `algorithm` on gen_max_entropy(m) for each m (ascending).
[[nodiscard]] ProbeTable entropy_scaling_probe(std::span<const int> m_list, Algorithm algorithm,
                                               double delta, const TrialOptions& options,
                                               const AlgorithmParams& params = {});

// ---------------------------------------------------------------------------
// Result files. Every file ends with a metadata footer carrying the tool
// version, master seed and config hash.

inline constexpr std::string_view kToolVersion = "0.3.0";

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> heuristic_algorithms;
};

[[nodiscard]] RunMetadata metadata_for(const ExperimentConfig& config);
// FNV-1a 64 of `text` as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view text);

// Column order: instance, algorithm, delta, trials, errors, error_rate, ci95,
// aborts, mean_samples, std_samples, H_total, entropy_nats, mt_bound,
// kks_bound, conjectured_bound, bound_ratio.
[[nodiscard]] std::string results_csv(const std::vector<TrialSummary>& rows, const RunMetadata& meta);
// `ranking`, when given, is emitted ahead of the metadata footer.
[[nodiscard]] nlohmann::ordered_json results_json(const std::vector<TrialSummary>& rows,
                                                  const RunMetadata& meta,
                                                  const ComparisonTable* ranking = nullptr);
[[nodiscard]] std::string probe_csv(const ProbeTable& table, const RunMetadata& meta);
[[nodiscard]] nlohmann::ordered_json probe_json(const ProbeTable& table, const RunMetadata& meta);

// Writes <out>.csv and/or <out>.json; returns the paths written.
std::vector<std::filesystem::path> write_text_outputs(const std::filesystem::path& out,
                                                      OutputFormat format, const std::string& csv,
                                                      const nlohmann::ordered_json& json);

}  // namespace bai
