#include "bai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "bai/errors.hpp"
#include "bai/instance_io.hpp"

namespace bai {

using nlohmann::json;

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::kCsv:
      return "csv";
    case OutputFormat::kJson:
      return "json";
    case OutputFormat::kBoth:
      return "both";
  }
  return "unknown";
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  if (name == "both") return OutputFormat::kBoth;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// ExperimentConfig

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (algorithms.empty()) throw ConfigError("at least one algorithm is required");
  if (deltas.empty()) throw ConfigError("at least one delta is required");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (budget_cap < 1) throw ConfigError("budget_cap must be at least 1");
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 0.5)) {
      throw ConfigError("delta " + std::to_string(d) + " outside (0, 0.5]");
    }
    if (d > 0.1) {
      std::cerr << "warning: delta " << d << " exceeds 0.1, the regime the bounds are stated for\n";
    }
  }
  if (!(params.median_epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(params.elimination.pull_constant > 0.0)) throw ConfigError("pull_constant must be positive");
}

BanditInstance ExperimentConfig::load_instance() const {
  if (const auto* path = std::get_if<std::filesystem::path>(&instance)) {
    const BanditInstance loaded = bai::load_instance(*path);
    return loaded.name() ? loaded : loaded.renamed(path->stem().string());
  }
  try {
    return std::get<InstanceSpec>(instance).build();
  } catch (const Error& e) {
    throw InstanceLoadError(std::string("cannot build instance: ") + e.what());
  }
}

json ExperimentConfig::reproducible_json() const {
  json doc;
  // The instance enters by value so a moved or renamed file hashes the same.
  doc["instance"] = instance_to_json(load_instance());
  json algos = json::array();
  for (Algorithm a : algorithms) algos.push_back(std::string(to_string(a)));
  doc["algorithms"] = algos;
  doc["deltas"] = deltas;
  doc["trials"] = trials;
  doc["seed"] = seed;
  doc["permute"] = permute;
  doc["budget_cap"] = budget_cap;
  doc["epsilon"] = params.median_epsilon;
  doc["pull_constant"] = params.elimination.pull_constant;
  return doc;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(reproducible_json().dump()); }

namespace {

template <typename T>
T get_field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field \"") + key + "\": " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "instance", "algorithms", "deltas", "trials", "seed", "permute", "budget_cap",
      "threads", "epsilon", "pull_constant", "out", "format"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config field \"" + key + "\"");
    }
  }

  ExperimentConfig config;
  if (!doc.contains("instance")) throw ConfigError("config needs an \"instance\"");
  const json& inst = doc["instance"];
  if (inst.is_string()) {
    std::filesystem::path p = inst.get<std::string>();
    config.instance = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  } else if (inst.is_object()) {
    try {
      config.instance = spec_from_json(inst);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  } else {
    throw ConfigError("\"instance\" must be a file path or a generator spec object");
  }

  for (const auto& name : get_field<std::vector<std::string>>(doc, "algorithms", {})) {
    try {
      config.algorithms.push_back(parse_algorithm(name));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  config.deltas = get_field(doc, "deltas", config.deltas);
  const auto trials = get_field<long long>(doc, "trials", static_cast<long long>(config.trials));
  if (trials < 1) throw ConfigError("trials must be at least 1");
  config.trials = static_cast<std::size_t>(trials);
  config.seed = get_field(doc, "seed", config.seed);
  config.permute = get_field(doc, "permute", config.permute);
  config.budget_cap = get_field(doc, "budget_cap", config.budget_cap);
  const auto threads = get_field<long long>(doc, "threads", config.threads);
  if (threads < 1) throw ConfigError("threads must be at least 1");
  config.threads = static_cast<unsigned>(threads);
  config.params.median_epsilon = get_field(doc, "epsilon", config.params.median_epsilon);
  config.params.elimination.pull_constant =
      get_field(doc, "pull_constant", config.params.elimination.pull_constant);
  config.out = get_field<std::string>(doc, "out", config.out.string());
  config.format = parse_output_format(get_field<std::string>(doc, "format", "both"));
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("malformed config file " + path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

// ---------------------------------------------------------------------------
// Trials

bool TrialSummary::meets_delta() const {
  const double n = static_cast<double>(trials);
  return error_rate <= delta + 3.0 * std::sqrt(delta * (1.0 - delta) / n);
}

namespace {

struct TrialOutcome {
  bool aborted = false;
  bool correct = false;
  bool survival_failure = false;
  std::size_t selected = 0;
  std::uint64_t samples = 0;
};

TrialOutcome run_one(const BanditInstance& base, const TrialAlgorithm& algorithm, double delta,
                     const TrialOptions& options, std::size_t t) {
  const std::uint64_t trial_seed = mix_seed(options.seed, t);
  const BanditInstance instance =
      options.permute ? apply_permutation(base, mix_seed(trial_seed, 1)) : base;
  SampleOracle oracle(instance, mix_seed(trial_seed, 2), options.budget_cap);
  const BaiResult result = algorithm(oracle, instance, delta);

  TrialOutcome out;
  out.aborted = result.aborted;
  out.selected = result.selected;
  out.samples = result.total_samples;
  out.correct = !result.aborted && result.selected == instance.best_arm();
  for (const auto& round : result.rounds) {
    if (std::find(round.survivors.begin(), round.survivors.end(), instance.best_arm()) ==
        round.survivors.end()) {
      out.survival_failure = true;
      break;
    }
  }
  return out;
}

std::vector<TrialOutcome> run_all(const BanditInstance& base, const TrialAlgorithm& algorithm,
                                  double delta, const TrialOptions& options) {
  std::vector<TrialOutcome> outcomes(options.trials);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(options.threads, 1U), options.trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < options.trials; ++t) {
      outcomes[t] = run_one(base, algorithm, delta, options, t);
    }
    return outcomes;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < options.trials; t = next++) {
          try {
            outcomes[t] = run_one(base, algorithm, delta, options, t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = options.trials;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

}  // namespace

TrialSummary run_trials(const BanditInstance& instance, const std::string& name,
                        const TrialAlgorithm& algorithm, double delta,
                        const TrialOptions& options) {
  if (options.trials < 1) throw ConfigError("trials must be at least 1");
  const std::vector<TrialOutcome> outcomes = run_all(instance, algorithm, delta, options);

  TrialSummary s;
  s.instance = name;
  s.delta = delta;
  s.trials = options.trials;
  s.selected_counts.assign(instance.num_arms(), 0);

  double sum = 0.0;
  std::size_t finished = 0;
  s.min_samples = std::numeric_limits<std::uint64_t>::max();
  for (const auto& o : outcomes) {
    if (o.selected < s.selected_counts.size()) ++s.selected_counts[o.selected];
    if (o.survival_failure) ++s.survival_failures;
    if (o.aborted) {
      ++s.aborts;
      continue;
    }
    if (!o.correct) ++s.errors;
    ++finished;
    sum += static_cast<double>(o.samples);
    s.min_samples = std::min(s.min_samples, o.samples);
    s.max_samples = std::max(s.max_samples, o.samples);
  }
  if (finished == 0) s.min_samples = 0;
  s.mean_samples = finished > 0 ? sum / static_cast<double>(finished) : 0.0;
  if (finished > 1) {
    double ss = 0.0;
    for (const auto& o : outcomes) {
      if (o.aborted) continue;
      const double d = static_cast<double>(o.samples) - s.mean_samples;
      ss += d * d;
    }
    s.std_samples = std::sqrt(ss / static_cast<double>(finished - 1));
  }

  const double n = static_cast<double>(s.trials);
  s.error_rate = static_cast<double>(s.errors) / n;
  s.ci95 = 1.96 * std::sqrt(s.error_rate * (1.0 - s.error_rate) / n);

  const GapProfile profile = gap_profile(instance);
  const GroupDecomposition groups = decompose(profile);
  const ComplexityBounds bounds = complexity_bounds(profile, groups, delta);
  s.total_weight = groups.total_weight;
  s.entropy_nats = groups.entropy_nat;
  s.mt_bound = bounds.mt;
  s.kks_bound = bounds.kks_jmns;
  s.conjectured_bound = bounds.conjectured;
  s.bound_ratio = s.mean_samples / bounds.conjectured;
  return s;
}

namespace {

TrialAlgorithm bind_algorithm(Algorithm algorithm, const AlgorithmParams& params) {
  return [algorithm, params](SampleOracle& oracle, const BanditInstance& truth, double delta) {
    return run_algorithm(algorithm, oracle, truth, delta, params);
  };
}

TrialSummary run_named(const BanditInstance& instance, Algorithm algorithm, double delta,
                       const TrialOptions& options, const AlgorithmParams& params) {
  TrialSummary s = run_trials(instance, instance.name().value_or("instance"),
                              bind_algorithm(algorithm, params), delta, options);
  s.algorithm = std::string(to_string(algorithm));
  s.heuristic = algorithm == Algorithm::kExpGapEntropyAdaptive;
  return s;
}

TrialOptions options_of(const ExperimentConfig& config) {
  TrialOptions options;
  options.trials = config.trials;
  options.seed = config.seed;
  options.permute = config.permute;
  options.budget_cap = config.budget_cap;
  options.threads = config.threads;
  return options;
}

}  // namespace

std::vector<TrialSummary> run_trials(const ExperimentConfig& config) {
  config.validate();
  const BanditInstance instance = config.load_instance();
  const TrialOptions options = options_of(config);
  std::vector<TrialSummary> rows;
  for (double delta : config.deltas) {
    for (Algorithm algorithm : config.algorithms) {
      rows.push_back(run_named(instance, algorithm, delta, options, config.params));
    }
  }
  return rows;
}

ComparisonTable compare_suite(const ExperimentConfig& config) {
  if (config.algorithms.size() < 2) {
    throw ConfigError("compare needs >= 2 algorithms");
  }
  ComparisonTable table;
  table.rows = run_trials(config);
  for (double delta : config.deltas) {
    std::vector<const TrialSummary*> eligible;
    for (const auto& row : table.rows) {
      if (row.delta == delta && row.aborts < row.trials && row.meets_delta()) {
        eligible.push_back(&row);
      }
    }
    std::stable_sort(eligible.begin(), eligible.end(), [](const auto* a, const auto* b) {
      return a->mean_samples < b->mean_samples;
    });
    std::vector<std::string> names;
    for (const auto* row : eligible) names.push_back(row->algorithm);
    table.ranking.emplace_back(delta, std::move(names));
  }
  return table;
}

ProbeTable entropy_scaling_probe(std::span<const int> m_list, Algorithm algorithm, double delta,
                                 const TrialOptions& options, const AlgorithmParams& params) {
  if (m_list.empty()) throw ConfigError("probe needs at least one group count");
  if (!std::is_sorted(m_list.begin(), m_list.end()) ||
      std::adjacent_find(m_list.begin(), m_list.end()) != m_list.end()) {
    throw ConfigError("probe group counts must be strictly ascending");
  }
  check_delta(delta);
  ProbeTable table;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int m : m_list) {
    const BanditInstance instance =
        gen_max_entropy(m).renamed("max-entropy(m=" + std::to_string(m) + ")");
    ProbeRow row;
    row.m = m;
    row.summary = run_named(instance, algorithm, delta, options, params);
    row.entropy_nats = row.summary.entropy_nats;
    row.total_weight = row.summary.total_weight;
    row.mean_samples = row.summary.mean_samples;
    row.bound_ratio = row.summary.bound_ratio;
    lo = std::min(lo, row.bound_ratio);
    hi = std::max(hi, row.bound_ratio);
    table.rows.push_back(std::move(row));
  }
  table.ratio_spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return table;
}

}  // namespace bai
