#include "bai/sampling.hpp"

#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "bai/errors.hpp"

namespace bai {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (label + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SampleOracle::SampleOracle(const BanditInstance& instance, std::uint64_t seed,
                           std::optional<std::uint64_t> budget_cap)
    : means_(instance.means().begin(), instance.means().end()),
      per_arm_pulls_(instance.num_arms(), 0),
      budget_cap_(budget_cap),
      seed_(seed) {
  streams_.reserve(means_.size());
  for (std::size_t arm = 0; arm < means_.size(); ++arm) {
    streams_.emplace_back(mix_seed(seed, arm));
  }
}

std::uint64_t SampleOracle::arm_pulls(std::size_t arm) const {
  if (arm >= per_arm_pulls_.size()) {
    throw IndexOutOfRange("arm " + std::to_string(arm) + " out of range");
  }
  return per_arm_pulls_[arm];
}

std::uint64_t SampleOracle::checked_count(double required) const {
  const double cap = budget_cap_
                         ? static_cast<double>(*budget_cap_ - total_pulls_)
                         : static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2);
  const double count = std::ceil(required);
  if (!(count <= cap)) {
    throw BudgetExceeded("round needs " + std::to_string(count) +
                         " pulls, exceeding the remaining budget");
  }
  return static_cast<std::uint64_t>(count < 1.0 ? 1.0 : count);
}

void SampleOracle::charge(std::size_t arm, std::uint64_t count) {
  if (arm >= streams_.size()) {
    throw IndexOutOfRange("arm " + std::to_string(arm) + " out of range (n = " +
                          std::to_string(streams_.size()) + ")");
  }
  if (count == 0) throw InvalidArgument("pull count must be positive");
  if (budget_cap_ && (count > *budget_cap_ || total_pulls_ > *budget_cap_ - count)) {
    throw BudgetExceeded("pull budget of " + std::to_string(*budget_cap_) + " exceeded");
  }
  total_pulls_ += count;
  per_arm_pulls_[arm] += count;
}

double SampleOracle::standard_normal(std::size_t arm) {
  // Stateless beyond the engine: a fresh distribution object per draw keeps
  // every arm's stream a pure function of its engine.
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  return normal(streams_[arm]);
}

std::vector<double> SampleOracle::pull(std::size_t arm, std::uint64_t count) {
  charge(arm, count);
  std::vector<double> rewards(count);
  for (auto& r : rewards) r = means_[arm] + standard_normal(arm);
  return rewards;
}

double SampleOracle::pull_sum(std::size_t arm, std::uint64_t count) {
  charge(arm, count);
  const double n = static_cast<double>(count);
  return n * means_[arm] + std::sqrt(n) * standard_normal(arm);
}

void EmpiricalStats::add_sum(std::size_t arm, double sum, std::uint64_t count) {
  if (count == 0) return;
  auto& t = counts_.at(arm);
  auto& m = means_.at(arm);
  t += count;
  // Streaming update: m += (sum - count * m) / t.
  m += (sum - static_cast<double>(count) * m) / static_cast<double>(t);
}

double confidence_radius(std::uint64_t t, double delta) {
  check_delta(delta);
  if (t == 0) throw InvalidArgument("confidence radius needs t >= 1");
  return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(t));
}

}  // namespace bai
