#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bai {

// A Best-1-Arm instance: n arms with unit-variance Gaussian rewards.
// Construction validates n >= 2, a strictly unique maximum mean and
// variance == 1; the object is immutable afterwards.
class BanditInstance {
 public:
  static constexpr double kVariance = 1.0;

  explicit BanditInstance(std::vector<double> means,
                          std::optional<std::string> name = std::nullopt,
                          double variance = kVariance);

  [[nodiscard]] std::span<const double> means() const { return means_; }
  [[nodiscard]] double mean(std::size_t arm) const { return means_.at(arm); }
  [[nodiscard]] std::size_t num_arms() const { return means_.size(); }
  [[nodiscard]] double variance() const { return kVariance; }
  [[nodiscard]] const std::optional<std::string>& name() const { return name_; }
  [[nodiscard]] std::size_t best_arm() const { return best_; }

  // Same means, different label.
  [[nodiscard]] BanditInstance renamed(std::string name) const;

 private:
  std::vector<double> means_;
  std::optional<std::string> name_;
  std::size_t best_ = 0;
};

// Gaps of the non-best arms, listed by descending mean (ranks 2..n), so
// gaps[0] is Delta_2 and the list is non-decreasing.
struct GapProfile {
  std::vector<double> gaps;
  // arm_indices[j] is the original index of the arm whose gap is gaps[j].
  std::vector<std::size_t> arm_indices;
  std::size_t best_index = 0;

  [[nodiscard]] std::size_t num_arms() const { return gaps.size() + 1; }
};

struct Group {
  // Ranks i in [2, n] (1-based, descending-mean order) falling in the band.
  std::vector<std::size_t> ranks;
  double weight = 0.0;  // H_k
  double prob = 0.0;    // p_k
};

// Dyadic partition of the gaps: group k holds gaps in [2^-k, 2^-k+1).
// Only nonempty groups are stored.
struct GroupDecomposition {
  std::map<int, Group> groups;
  double total_weight = 0.0;  // H
  double entropy_nat = 0.0;

  [[nodiscard]] std::size_t num_groups() const { return groups.size(); }
  [[nodiscard]] double entropy_bits() const;
};

// Closed-form complexity expressions with all hidden constants set to 1.
struct ComplexityBounds {
  double mt = 0.0;
  double kks_jmns = 0.0;
  double eq1 = 0.0;
  double eq2_clustered = 0.0;
  double conjectured = 0.0;
  double delta = 0.0;
};

// Dyadic band index k with 2^-k <= gap < 2^-k+1. Exact for every positive
// finite double.
[[nodiscard]] int dyadic_band(double gap);

// ln(ln(x)) clamped to stay defined and nonnegative for every x > 0:
// ln(max(ln(max(x, e)), 1)).
[[nodiscard]] double clamped_lnln(double x);

// Shannon entropy (nats) of the distribution proportional to `weights`.
// Weights must be positive.
[[nodiscard]] double entropy_of_weights(std::span<const double> weights);

[[nodiscard]] GapProfile gap_profile(const BanditInstance& instance);
[[nodiscard]] GroupDecomposition decompose(const GapProfile& profile);
[[nodiscard]] double gap_entropy(const BanditInstance& instance);
[[nodiscard]] ComplexityBounds complexity_bounds(const BanditInstance& instance,
                                                 double delta);
[[nodiscard]] ComplexityBounds complexity_bounds(const GapProfile& profile,
                                                 const GroupDecomposition& groups,
                                                 double delta);

// Throws InvalidDelta unless 0 < delta < 1.
void check_delta(double delta);

}  // namespace bai
