#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include "bai/algorithms.hpp"
#include "bai/errors.hpp"

namespace bai {
namespace {

std::vector<std::size_t> all_arms(const SampleOracle& oracle) {
  std::vector<std::size_t> arms(oracle.num_arms());
  std::iota(arms.begin(), arms.end(), std::size_t{0});
  return arms;
}

void mark_aborted(BaiResult& result, const SampleOracle& oracle, std::string reason) {
  result.aborted = true;
  result.abort_reason = std::move(reason);
  result.total_samples = oracle.total_pulls();
}

// Supplies delta_r for each round of exponential-gap elimination. `alive`,
// `reference` and `round_means` describe the previous round (empty before
// round 1).
class RoundBudget {
 public:
  virtual ~RoundBudget() = default;
  virtual double delta_for(int round, std::span<const std::size_t> alive,
                           std::size_t reference, std::span<const double> round_means) = 0;
  [[nodiscard]] virtual bool heuristic() const { return false; }
};

class PlannedBudget final : public RoundBudget {
 public:
  explicit PlannedBudget(AllocationPlan plan) : plan_(std::move(plan)) {}
  double delta_for(int round, std::span<const std::size_t>, std::size_t,
                   std::span<const double>) override {
    return plan_.deltas.at(static_cast<std::size_t>(round - 1));
  }

 private:
  AllocationPlan plan_;
};

// Plug-in estimate of the round weights. Each surviving arm's gap to the
// last reference arm is floored at Delta_r / 2 and assigned to its dyadic
// band (bands at or above the current round count toward this round). Round
// r spends the fraction H_r / H_remaining of half the unspent budget, so
// the other half is always kept in reserve and the total never exceeds delta.
class AdaptiveBudget final : public RoundBudget {
 public:
  AdaptiveBudget(double delta, int max_rounds) : remaining_(delta), max_rounds_(max_rounds) {}

  double delta_for(int round, std::span<const std::size_t> alive, std::size_t reference,
                   std::span<const double> round_means) override {
    double share = 1.0;
    if (!round_means.empty()) {
      const double floor_gap = std::ldexp(1.0, -round) / 2.0;
      const double ref_mean = round_means[reference];
      double current = 0.0;
      double total = 0.0;
      for (std::size_t arm : alive) {
        if (arm == reference) continue;
        const double gap = std::max(ref_mean - round_means[arm], floor_gap);
        const double w = 1.0 / (gap * gap);
        total += w;
        if (dyadic_band(gap) <= round) current += w;
      }
      share = total > 0.0 ? current / total : 1.0;
    }
    share = std::max(share, 1.0 / max_rounds_);
    const double spend = remaining_ / 2.0 * share;
    remaining_ -= spend;
    return spend;
  }
  [[nodiscard]] bool heuristic() const override { return true; }

 private:
  double remaining_;
  int max_rounds_;
};

BaiResult run_exp_gap(SampleOracle& oracle, RoundBudget& budget, const EliminationConfig& config) {
  BaiResult result;
  result.heuristic = budget.heuristic();
  std::vector<std::size_t> alive = all_arms(oracle);
  std::vector<double> round_means;
  std::size_t reference = alive.front();

  try {
    for (int r = 1; r <= config.max_rounds && alive.size() > 1; ++r) {
      const double gap = std::ldexp(1.0, -r);
      const double delta_r = budget.delta_for(r, alive, reference, round_means);
      const std::uint64_t before = oracle.total_pulls();

      reference = median_elimination(oracle, alive, gap / 4.0, delta_r / 2.0);

      const std::uint64_t t = oracle.checked_count(
          config.pull_constant * std::log(2.0 / delta_r) / (gap * gap));
      round_means.assign(oracle.num_arms(), 0.0);
      for (std::size_t arm : alive) {
        round_means[arm] = oracle.pull_sum(arm, t) / static_cast<double>(t);
      }
      const double threshold = round_means[reference] - gap / 2.0;

      RoundTrace trace;
      trace.round = r;
      trace.target_gap = gap;
      trace.delta = delta_r;
      trace.alive_before = alive.size();
      for (std::size_t arm : alive) {
        if (round_means[arm] >= threshold) trace.survivors.push_back(arm);
      }
      trace.alive_after = trace.survivors.size();
      trace.samples = oracle.total_pulls() - before;
      alive = trace.survivors;
      result.rounds.push_back(std::move(trace));
    }
  } catch (const BudgetExceeded& e) {
    result.selected = reference;
    mark_aborted(result, oracle, e.what());
    return result;
  }

  result.selected = alive.front();
  result.total_samples = oracle.total_pulls();
  if (alive.size() > 1) {
    mark_aborted(result, oracle,
                 "more than one arm alive after " + std::to_string(config.max_rounds) + " rounds");
  }
  return result;
}

}  // namespace

BaiResult uniform_se(SampleOracle& oracle, double delta) {
  check_delta(delta);
  const std::size_t n = oracle.num_arms();
  const double per_round_scale = 6.0 / (std::numbers::pi * std::numbers::pi) * delta;

  BaiResult result;
  std::vector<std::size_t> alive = all_arms(oracle);
  EmpiricalStats stats(n);
  try {
    for (std::uint64_t t = 1; alive.size() > 1; ++t) {
      for (std::size_t arm : alive) stats.add_sum(arm, oracle.pull_sum(arm, 1), 1);

      const double round_delta = per_round_scale / (static_cast<double>(t) * t);
      const double radius = confidence_radius(t, round_delta / static_cast<double>(n));
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t arm : alive) top = std::max(top, stats.mean(arm));

      std::vector<std::size_t> survivors;
      for (std::size_t arm : alive) {
        if (stats.mean(arm) + radius >= top - radius) survivors.push_back(arm);
      }
      if (survivors.size() == alive.size()) continue;

      RoundTrace trace;
      trace.round = static_cast<int>(t);
      trace.target_gap = 2.0 * radius;
      trace.delta = round_delta;
      trace.alive_before = alive.size();
      trace.alive_after = survivors.size();
      trace.samples = oracle.total_pulls();
      trace.survivors = survivors;
      result.rounds.push_back(std::move(trace));
      alive = std::move(survivors);
    }
  } catch (const BudgetExceeded& e) {
    result.selected = *std::max_element(alive.begin(), alive.end(), [&](auto a, auto b) {
      return stats.mean(a) < stats.mean(b);
    });
    mark_aborted(result, oracle, e.what());
    return result;
  }
  // Round traces recorded cumulative pulls; convert to per-round counts.
  std::uint64_t previous = 0;
  for (auto& trace : result.rounds) {
    const std::uint64_t cumulative = trace.samples;
    trace.samples = cumulative - previous;
    previous = cumulative;
  }
  result.selected = alive.front();
  result.total_samples = oracle.total_pulls();
  return result;
}

std::size_t median_elimination(SampleOracle& oracle, std::span<const std::size_t> arms,
                               double epsilon, double delta, std::vector<RoundTrace>* trace) {
  check_delta(delta);
  if (!(epsilon > 0.0)) throw InvalidArgument("median elimination needs epsilon > 0");
  if (arms.empty()) throw InvalidArgument("median elimination needs at least one arm");

  std::vector<std::size_t> current(arms.begin(), arms.end());
  double eps = epsilon / 4.0;
  double del = delta / 2.0;
  std::vector<double> means(oracle.num_arms(), 0.0);
  for (int l = 1; current.size() > 1; ++l) {
    const std::uint64_t before = oracle.total_pulls();
    // One-sided Gaussian tail: exp(-t (eps/2)^2 / 2) <= del / 3.
    const std::uint64_t t = oracle.checked_count(8.0 / (eps * eps) * std::log(3.0 / del));
    for (std::size_t arm : current) {
      means[arm] = oracle.pull_sum(arm, t) / static_cast<double>(t);
    }
    std::vector<std::size_t> ranked = current;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
    ranked.resize((ranked.size() + 1) / 2);
    if (trace != nullptr) {
      RoundTrace entry;
      entry.round = l;
      entry.target_gap = eps;
      entry.delta = del;
      entry.alive_before = current.size();
      entry.alive_after = ranked.size();
      entry.samples = oracle.total_pulls() - before;
      entry.survivors = ranked;
      trace->push_back(std::move(entry));
    }
    current = std::move(ranked);
    eps *= 0.75;
    del /= 2.0;
  }
  return current.front();
}

std::size_t median_elimination(SampleOracle& oracle, double epsilon, double delta) {
  const std::vector<std::size_t> arms = all_arms(oracle);
  return median_elimination(oracle, arms, epsilon, delta);
}

BaiResult median_elimination_run(SampleOracle& oracle, double epsilon, double delta) {
  BaiResult result;
  const std::vector<std::size_t> arms = all_arms(oracle);
  try {
    result.selected = median_elimination(oracle, arms, epsilon, delta, &result.rounds);
  } catch (const BudgetExceeded& e) {
    result.selected = result.rounds.empty() ? 0 : result.rounds.back().survivors.front();
    mark_aborted(result, oracle, e.what());
    return result;
  }
  result.total_samples = oracle.total_pulls();
  return result;
}

BaiResult exp_gap_elimination(SampleOracle& oracle, double delta, AllocationScheme scheme,
                              const EliminationConfig& config) {
  check_delta(delta);
  switch (scheme) {
    case AllocationScheme::kFixedQuadratic: {
      PlannedBudget budget(fixed_quadratic_plan(delta, config.max_rounds));
      return run_exp_gap(oracle, budget, config);
    }
    case AllocationScheme::kAdaptiveEntropy:
      return entropy_elim_adaptive(oracle, delta, config);
    case AllocationScheme::kOracleEntropy:
      break;
  }
  throw InvalidArgument("oracle-entropy allocation needs the true instance; use entropy_elim_oracle");
}

BaiResult entropy_elim_oracle(SampleOracle& oracle, const BanditInstance& truth, double delta,
                              const EliminationConfig& config) {
  check_delta(delta);
  if (truth.num_arms() != oracle.num_arms()) {
    throw TruthMismatch("truth has " + std::to_string(truth.num_arms()) +
                        " arms but the oracle has " + std::to_string(oracle.num_arms()));
  }
  PlannedBudget budget(oracle_entropy_plan(truth, delta, config.max_rounds));
  return run_exp_gap(oracle, budget, config);
}

BaiResult entropy_elim_adaptive(SampleOracle& oracle, double delta, const EliminationConfig& config) {
  check_delta(delta);
  AdaptiveBudget budget(delta, config.max_rounds);
  return run_exp_gap(oracle, budget, config);
}

}  // namespace bai
