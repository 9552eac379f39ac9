#include <cmath>
#include <numbers>
#include <numeric>

#include "bai/algorithms.hpp"
#include "bai/errors.hpp"

namespace bai {

std::string_view to_string(AllocationScheme scheme) {
  switch (scheme) {
    case AllocationScheme::kFixedQuadratic:
      return "fixed-quadratic";
    case AllocationScheme::kOracleEntropy:
      return "oracle-entropy";
    case AllocationScheme::kAdaptiveEntropy:
      return "adaptive-entropy";
  }
  return "unknown";
}

double AllocationPlan::total() const {
  return std::accumulate(deltas.begin(), deltas.end(), 0.0);
}

AllocationPlan optimal_allocation(std::span<const double> weights, double delta) {
  check_delta(delta);
  if (weights.empty()) throw InvalidArgument("allocation needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw NonPositiveWeight("allocation weights must be positive and finite");
    }
    total += w;
  }
  AllocationPlan plan;
  plan.scheme = AllocationScheme::kOracleEntropy;
  plan.weights.assign(weights.begin(), weights.end());
  plan.deltas.reserve(weights.size());
  for (double w : weights) plan.deltas.push_back(delta * (w / total));
  return plan;
}

double allocation_objective(std::span<const double> weights, std::span<const double> deltas) {
  if (weights.size() != deltas.size()) {
    throw InvalidArgument("weights and budgets differ in length");
  }
  double objective = 0.0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    objective += weights[r] * std::log(1.0 / deltas[r]);
  }
  return objective;
}

AllocationPlan fixed_quadratic_plan(double delta, int rounds) {
  check_delta(delta);
  if (rounds < 1) throw InvalidArgument("plan needs at least one round");
  AllocationPlan plan;
  plan.scheme = AllocationScheme::kFixedQuadratic;
  plan.deltas.reserve(static_cast<std::size_t>(rounds));
  const double scale = 6.0 / (std::numbers::pi * std::numbers::pi) * delta;
  for (int r = 1; r <= rounds; ++r) {
    plan.deltas.push_back(scale / (static_cast<double>(r) * r));
  }
  return plan;
}

AllocationPlan oracle_entropy_plan(const BanditInstance& truth, double delta, int rounds) {
  check_delta(delta);
  if (rounds < 1) throw InvalidArgument("plan needs at least one round");
  const GroupDecomposition groups = decompose(gap_profile(truth));

  std::vector<double> round_weights(static_cast<std::size_t>(rounds), 0.0);
  for (const auto& [band, group] : groups.groups) {
    const int r = std::max(band, 1);
    if (r > rounds) {
      throw InvalidArgument("instance has gaps below the resolution of " +
                            std::to_string(rounds) + " rounds");
    }
    round_weights[static_cast<std::size_t>(r - 1)] += group.weight;
  }

  std::vector<double> active;
  for (double w : round_weights) {
    if (w > 0.0) active.push_back(w);
  }
  // Rounds without a group get a small floor; the pool set aside for floors
  // is exactly what `rounds` floors can use, the rest goes to the groups.
  const double floor = delta / (2.0 * static_cast<double>(rounds) * rounds);
  const AllocationPlan split = optimal_allocation(active, delta - floor * rounds);

  AllocationPlan plan;
  plan.scheme = AllocationScheme::kOracleEntropy;
  plan.weights = round_weights;
  plan.deltas.reserve(round_weights.size());
  std::size_t next = 0;
  for (double w : round_weights) {
    plan.deltas.push_back(w > 0.0 ? split.deltas[next++] : floor);
  }
  return plan;
}

}  // namespace bai
