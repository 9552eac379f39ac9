#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bai/core_model.hpp"
#include "bai/sampling.hpp"

namespace bai {

// Elimination rounds target gap 2^-r; runs that still have more than one arm
// alive after this many rounds are aborted (gaps below 2^-64 are outside the
// simulable range).
inline constexpr int kMaxRounds = 64;

struct RoundTrace {
  int round = 0;
  double target_gap = 0.0;  // Delta_r = 2^-r for exponential-gap rounds
  double delta = 0.0;       // failure budget spent in this round
  std::size_t alive_before = 0;
  std::size_t alive_after = 0;
  std::uint64_t samples = 0;
  std::vector<std::size_t> survivors;
};

struct BaiResult {
  std::size_t selected = 0;
  std::uint64_t total_samples = 0;
  std::vector<RoundTrace> rounds;
  bool aborted = false;
  // Set by strategies whose guarantees rest on a heuristic (adaptive entropy
  // budgeting); reported in output metadata.
  bool heuristic = false;
  std::string abort_reason;
};

// ---------------------------------------------------------------------------
// Failure-budget allocation across elimination rounds.

enum class AllocationScheme { kFixedQuadratic, kOracleEntropy, kAdaptiveEntropy };

[[nodiscard]] std::string_view to_string(AllocationScheme scheme);

struct AllocationPlan {
  std::vector<double> deltas;   // deltas[j] is the budget of round j + 1
  std::vector<double> weights;  // H_r used to derive the budgets (may be empty)
  AllocationScheme scheme = AllocationScheme::kFixedQuadratic;

  [[nodiscard]] double total() const;
};

// Minimizes sum_r H_r ln(1/delta_r) subject to sum_r delta_r <= delta by
// setting delta_r = delta * H_r / sum_j H_j.
[[nodiscard]] AllocationPlan optimal_allocation(std::span<const double> weights, double delta);

// sum_r H_r ln(1/delta_r).
[[nodiscard]] double allocation_objective(std::span<const double> weights,
                                          std::span<const double> deltas);

// delta_r = (6 / pi^2) * delta / r^2, r = 1..rounds.
[[nodiscard]] AllocationPlan fixed_quadratic_plan(double delta, int rounds = kMaxRounds);

// Rounds without a true group get delta / (2 * rounds^2); the remaining
// delta - delta / (2 * rounds) is split over the rounds that have nonempty
// groups by optimal_allocation. Groups with band k <= 1 are charged to
// round 1.
[[nodiscard]] AllocationPlan oracle_entropy_plan(const BanditInstance& truth, double delta,
                                                 int rounds = kMaxRounds);

// ---------------------------------------------------------------------------
// Strategies. All take ownership of nothing: they drive the oracle passed in
// and report what they did.

struct EliminationConfig {
  // Per-round, per-arm pulls: ceil(pull_constant * Delta_r^-2 * ln(2/delta_r)).
  double pull_constant = 32.0;
  int max_rounds = kMaxRounds;
};

struct LilUcbConfig {
  double epsilon = 0.01;
  double beta = 1.0;
  double lambda = 9.0;  // ((2 + beta) / beta)^2
};

// Successive elimination with a uniform per-arm confidence schedule
// delta_t = 6 delta / (pi^2 n t^2).
BaiResult uniform_se(SampleOracle& oracle, double delta);

// Median elimination over `arms`: returns an arm whose mean is within
// epsilon of the best in `arms` with probability >= 1 - delta. Appends one
// trace entry per halving round when `trace` is non-null.
std::size_t median_elimination(SampleOracle& oracle, std::span<const std::size_t> arms,
                               double epsilon, double delta,
                               std::vector<RoundTrace>* trace = nullptr);
std::size_t median_elimination(SampleOracle& oracle, double epsilon, double delta);
// Median elimination over all arms, packaged as a BaiResult.
BaiResult median_elimination_run(SampleOracle& oracle, double epsilon, double delta);

// Exponential-gap elimination. kOracleEntropy needs the true instance and is
// reachable through entropy_elim_oracle; passing it here throws
// InvalidArgument.
BaiResult exp_gap_elimination(SampleOracle& oracle, double delta, AllocationScheme scheme,
                              const EliminationConfig& config = {});
BaiResult entropy_elim_oracle(SampleOracle& oracle, const BanditInstance& truth, double delta,
                              const EliminationConfig& config = {});
BaiResult entropy_elim_adaptive(SampleOracle& oracle, double delta,
                                const EliminationConfig& config = {});

// lil'UCB confidence term (1+beta)(1+sqrt(eps)) sqrt(2(1+eps) ln(ln((1+eps)t)/delta_tilde) / t).
[[nodiscard]] double lil_ucb_confidence(std::uint64_t t, double epsilon, double beta,
                                        double delta_tilde);
// Internal confidence parameter for which lil'UCB errs with probability at
// most delta: solves 4 sqrt(c delta_tilde) + 4 c delta_tilde = delta with
// c = (2+eps)/eps * (1/ln(1+eps))^(1+eps).
[[nodiscard]] double lil_ucb_delta_tilde(double delta, double epsilon);
BaiResult lil_ucb(SampleOracle& oracle, double delta, const LilUcbConfig& config = {});

// ---------------------------------------------------------------------------
// Named strategies, as selected from configs and the command line.

enum class Algorithm {
  kUniformSe,
  kMedianElim,
  kExpGap,
  kExpGapEntropyOracle,
  kExpGapEntropyAdaptive,
  kLilUcb,
};

[[nodiscard]] std::string_view to_string(Algorithm algorithm);
// Throws InvalidArgument for unknown names.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);
[[nodiscard]] std::span<const Algorithm> all_algorithms();

struct AlgorithmParams {
  // Accuracy handed to median-elim when it is run as a stand-alone
  // identification strategy; it returns the best arm whenever
  // epsilon < Delta_2.
  double median_epsilon = 0.1;
  EliminationConfig elimination;
  LilUcbConfig lil;
};

// `truth` is consulted only by kExpGapEntropyOracle.
BaiResult run_algorithm(Algorithm algorithm, SampleOracle& oracle, const BanditInstance& truth,
                        double delta, const AlgorithmParams& params = {});

}  // namespace bai
