#include "bai/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bai/errors.hpp"

namespace bai {

BanditInstance::BanditInstance(std::vector<double> means,
                               std::optional<std::string> name,
                               double variance)
    : means_(std::move(means)), name_(std::move(name)) {
  if (variance != kVariance) {
    std::ostringstream msg;
    msg << "variance must be 1.0, got " << variance;
    throw InvalidVariance(msg.str());
  }
  if (means_.size() < 2) {
    throw TooFewArms("an instance needs at least 2 arms, got " +
                     std::to_string(means_.size()));
  }
  for (double m : means_) {
    if (!std::isfinite(m)) throw InvalidArgument("arm means must be finite");
  }
  auto top = std::max_element(means_.begin(), means_.end());
  best_ = static_cast<std::size_t>(top - means_.begin());
  if (std::count(means_.begin(), means_.end(), *top) > 1) {
    std::ostringstream msg;
    msg << "largest mean " << *top
        << " is attained by more than one arm (unique maximum required)";
    throw NonUniqueMaximum(msg.str());
  }
}

BanditInstance BanditInstance::renamed(std::string name) const {
  return BanditInstance(means_, std::move(name));
}

double GroupDecomposition::entropy_bits() const {
  return entropy_nat / std::numbers::ln2;
}

int dyadic_band(double gap) {
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    throw NonPositiveGap("gap must be positive and finite");
  }
  // gap = f * 2^e with f in [0.5, 1), so floor(log2(gap)) = e - 1.
  int exponent = 0;
  std::frexp(gap, &exponent);
  return 1 - exponent;
}

double clamped_lnln(double x) {
  return std::log(std::max(std::log(std::max(x, std::numbers::e)), 1.0));
}

double entropy_of_weights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw NonPositiveWeight("weights must be positive");
    total += w;
  }
  double ent = 0.0;
  for (double w : weights) {
    const double p = w / total;
    ent -= p * std::log(p);
  }
  return std::max(ent, 0.0);
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    std::ostringstream msg;
    msg << "delta must lie in (0, 1), got " << delta;
    throw InvalidDelta(msg.str());
  }
}

GapProfile gap_profile(const BanditInstance& instance) {
  const auto means = instance.means();
  std::vector<std::size_t> order(means.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable so equal means keep their original relative order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return means[a] > means[b];
  });

  GapProfile profile;
  profile.best_index = order.front();
  const double top = means[order.front()];
  profile.gaps.reserve(order.size() - 1);
  profile.arm_indices.reserve(order.size() - 1);
  for (std::size_t j = 1; j < order.size(); ++j) {
    profile.gaps.push_back(top - means[order[j]]);
    profile.arm_indices.push_back(order[j]);
  }
  return profile;
}

GroupDecomposition decompose(const GapProfile& profile) {
  GroupDecomposition out;
  for (std::size_t j = 0; j < profile.gaps.size(); ++j) {
    const double gap = profile.gaps[j];
    Group& group = out.groups[dyadic_band(gap)];
    group.ranks.push_back(j + 2);
    group.weight += 1.0 / (gap * gap);
  }
  std::vector<double> weights;
  weights.reserve(out.groups.size());
  for (const auto& [k, group] : out.groups) {
    out.total_weight += group.weight;
    weights.push_back(group.weight);
  }
  for (auto& [k, group] : out.groups) group.prob = group.weight / out.total_weight;
  out.entropy_nat = entropy_of_weights(weights);
  return out;
}

double gap_entropy(const BanditInstance& instance) {
  return decompose(gap_profile(instance)).entropy_nat;
}

ComplexityBounds complexity_bounds(const GapProfile& profile,
                                   const GroupDecomposition& groups,
                                   double delta) {
  check_delta(delta);
  const double log_inv_delta = std::log(1.0 / delta);
  const double n = static_cast<double>(profile.num_arms());

  double lnln_gap_sum = 0.0;
  double lnln_min_sum = 0.0;
  for (double gap : profile.gaps) {
    const double w = 1.0 / (gap * gap);
    lnln_gap_sum += w * clamped_lnln(1.0 / gap);
    lnln_min_sum += w * clamped_lnln(std::min(n, 1.0 / gap));
  }
  const double gap2 = profile.gaps.front();
  const double top_pair = clamped_lnln(1.0 / gap2) / (gap2 * gap2);

  ComplexityBounds b;
  b.delta = delta;
  // mt and conjectured share H so that conjectured >= mt holds exactly.
  b.mt = groups.total_weight * log_inv_delta;
  b.kks_jmns = lnln_gap_sum + b.mt;
  b.eq1 = top_pair + b.mt + lnln_min_sum;
  b.eq2_clustered = top_pair + b.mt;
  b.conjectured = groups.total_weight * (log_inv_delta + groups.entropy_nat);
  return b;
}

ComplexityBounds complexity_bounds(const BanditInstance& instance, double delta) {
  check_delta(delta);
  const GapProfile profile = gap_profile(instance);
  return complexity_bounds(profile, decompose(profile), delta);
}

}  // namespace bai
