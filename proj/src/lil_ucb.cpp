#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bai/algorithms.hpp"
#include "bai/errors.hpp"

namespace bai {

double lil_ucb_confidence(std::uint64_t t, double epsilon, double beta, double delta_tilde) {
  if (t == 0) throw InvalidArgument("lil'UCB confidence needs t >= 1");
  const double tt = static_cast<double>(t);
  const double inner = std::log((1.0 + epsilon) * tt) / delta_tilde;
  const double log_term = std::log(std::max(inner, std::numbers::e));
  return (1.0 + beta) * (1.0 + std::sqrt(epsilon)) *
         std::sqrt(2.0 * (1.0 + epsilon) * log_term / tt);
}

double lil_ucb_delta_tilde(double delta, double epsilon) {
  check_delta(delta);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("lil'UCB epsilon must lie in (0, 1)");
  }
  const double c = (2.0 + epsilon) / epsilon * std::pow(1.0 / std::log1p(epsilon), 1.0 + epsilon);
  // x = sqrt(c * delta_tilde) solves 4x + 4x^2 = delta.
  const double x = (std::sqrt(1.0 + delta) - 1.0) / 2.0;
  return x * x / c;
}

BaiResult lil_ucb(SampleOracle& oracle, double delta, const LilUcbConfig& config) {
  check_delta(delta);
  const double delta_tilde = lil_ucb_delta_tilde(delta, config.epsilon);
  const std::size_t n = oracle.num_arms();

  EmpiricalStats stats(n);
  std::vector<double> index(n);
  auto refresh = [&](std::size_t arm) {
    index[arm] = stats.mean(arm) + lil_ucb_confidence(stats.count(arm), config.epsilon,
                                                      config.beta, delta_tilde);
  };
  auto most_pulled = [&] {
    std::size_t best = 0;
    for (std::size_t arm = 1; arm < n; ++arm) {
      if (stats.count(arm) > stats.count(best)) best = arm;
    }
    return best;
  };

  BaiResult result;
  try {
    for (std::size_t arm = 0; arm < n; ++arm) {
      stats.add_sum(arm, oracle.pull_sum(arm, 1), 1);
      refresh(arm);
    }

    // Only the pulled arm's index moves, so the leader keeps pulling until
    // it drops below the cached runner-up; then both are recomputed.
    std::size_t leader = 0;
    double runner_up = 0.0;
    auto rescan = [&] {
      leader = static_cast<std::size_t>(std::max_element(index.begin(), index.end()) - index.begin());
      runner_up = -std::numeric_limits<double>::infinity();
      for (std::size_t arm = 0; arm < n; ++arm) {
        if (arm != leader) runner_up = std::max(runner_up, index[arm]);
      }
    };
    rescan();

    std::uint64_t total = n;
    for (;;) {
      stats.add_sum(leader, oracle.pull_sum(leader, 1), 1);
      ++total;
      refresh(leader);
      // Stopping: one arm has more than 1 + lambda * (pulls of all others).
      const auto own = static_cast<double>(stats.count(leader));
      if (own >= 1.0 + config.lambda * (static_cast<double>(total) - own)) break;
      if (index[leader] < runner_up) rescan();
    }
  } catch (const BudgetExceeded& e) {
    result.selected = most_pulled();
    result.aborted = true;
    result.abort_reason = e.what();
    result.total_samples = oracle.total_pulls();
    return result;
  }
  result.selected = most_pulled();
  result.total_samples = oracle.total_pulls();
  return result;
}

}  // namespace bai
