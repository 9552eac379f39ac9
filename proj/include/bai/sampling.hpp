#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "bai/core_model.hpp"

namespace bai {

inline constexpr std::uint64_t kDefaultBudgetCap = 1'000'000'000;

// SplitMix64 finalizer; used to derive independent stream seeds from a
// master seed and an integer label.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label);

// Seeded Gaussian reward oracle.
//
// Each arm owns its own std::mt19937_64 stream seeded with
// mix_seed(seed, arm); normal variates come from Boost's ziggurat
// normal_distribution, so reward sequences are reproducible across platforms
// and interleaving pulls across arms never changes what any one arm yields.
//
// The wrapped instance is private: algorithms observe arms only through
// pull() and pull_sum().
class SampleOracle {
 public:
  SampleOracle(const BanditInstance& instance, std::uint64_t seed,
               std::optional<std::uint64_t> budget_cap = kDefaultBudgetCap);

  // `count` i.i.d. draws from Normal(mu_arm, 1).
  std::vector<double> pull(std::size_t arm, std::uint64_t count);

  // Sum of `count` i.i.d. draws from Normal(mu_arm, 1). The sum is drawn in
  // one step as Normal(count * mu_arm, count), which has exactly the same
  // law; the oracle still charges `count` pulls.
  double pull_sum(std::size_t arm, std::uint64_t count);

  [[nodiscard]] std::size_t num_arms() const { return streams_.size(); }
  [[nodiscard]] std::uint64_t total_pulls() const { return total_pulls_; }
  [[nodiscard]] std::uint64_t arm_pulls(std::size_t arm) const;
  [[nodiscard]] const std::vector<std::uint64_t>& per_arm_pulls() const { return per_arm_pulls_; }
  [[nodiscard]] std::optional<std::uint64_t> budget_cap() const { return budget_cap_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  // Converts a real-valued sample requirement into a pull count, throwing
  // BudgetExceeded when it cannot fit in the remaining budget.
  [[nodiscard]] std::uint64_t checked_count(double required) const;

 private:
  void charge(std::size_t arm, std::uint64_t count);
  double standard_normal(std::size_t arm);

  std::vector<double> means_;
  std::vector<std::mt19937_64> streams_;
  std::vector<std::uint64_t> per_arm_pulls_;
  std::uint64_t total_pulls_ = 0;
  std::optional<std::uint64_t> budget_cap_;
  std::uint64_t seed_;
};

// Running per-arm pull counts and means.
class EmpiricalStats {
 public:
  explicit EmpiricalStats(std::size_t arms) : counts_(arms, 0), means_(arms, 0.0) {}

  void add(std::size_t arm, double reward) { add_sum(arm, reward, 1); }
  // Folds in `count` rewards whose sum is `sum`.
  void add_sum(std::size_t arm, double sum, std::uint64_t count);

  [[nodiscard]] std::uint64_t count(std::size_t arm) const { return counts_.at(arm); }
  [[nodiscard]] double mean(std::size_t arm) const { return means_.at(arm); }
  [[nodiscard]] std::size_t num_arms() const { return counts_.size(); }

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<double> means_;
};

// Two-sided sub-Gaussian radius sqrt(2 ln(2/delta) / t) for unit variance.
[[nodiscard]] double confidence_radius(std::uint64_t t, double delta);

}  // namespace bai
