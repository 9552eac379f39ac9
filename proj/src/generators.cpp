#include "bai/generators.hpp"

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "bai/errors.hpp"
#include "bai/sampling.hpp"

namespace bai {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kTwoArm:
      return "two-arm";
    case Family::kClustered:
      return "clustered";
    case Family::kMaxEntropy:
      return "max-entropy";
    case Family::kRandom:
      return "random";
    case Family::kExplicit:
      return "explicit";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::kTwoArm, Family::kClustered, Family::kMaxEntropy, Family::kRandom,
                   Family::kExplicit}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown instance family '" + std::string(name) + "'");
}

BanditInstance gen_two_arm(double gap) {
  if (!(gap > 0.0)) throw NonPositiveGap("two-arm gap must be positive");
  return BanditInstance({1.0, 1.0 - gap});
}

BanditInstance gen_clustered(std::span<const std::size_t> sizes, std::span<const double> gaps,
                             double base_mean) {
  if (sizes.size() != gaps.size()) {
    throw InvalidArgument("clustered generator: sizes and gaps differ in length");
  }
  std::vector<double> means{base_mean};
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (!(gaps[j] > 0.0)) throw NonPositiveGap("clustered generator: gaps must be positive");
    means.insert(means.end(), sizes[j], base_mean - gaps[j]);
  }
  return BanditInstance(std::move(means));
}

BanditInstance gen_max_entropy(int m) {
  if (m < 1 || m > kMaxEntropyGroupCap) {
    throw InvalidArgument("max-entropy generator needs 1 <= m <= " +
                          std::to_string(kMaxEntropyGroupCap));
  }
  std::vector<double> means{1.0};
  for (int k = 1; k <= m; ++k) {
    const auto count = static_cast<std::size_t>(1) << (2 * (m - k));
    means.insert(means.end(), count, 1.0 - std::ldexp(1.0, -k));
  }
  return BanditInstance(std::move(means));
}

BanditInstance gen_random(std::size_t n, double gap_min, double gap_max, std::uint64_t seed) {
  if (n < 2) throw TooFewArms("random generator needs n >= 2");
  if (!(gap_min > 0.0 && gap_min <= gap_max && gap_max <= 1.0)) {
    throw InvalidArgument("random generator needs 0 < gap_min <= gap_max <= 1");
  }
  std::mt19937_64 engine(mix_seed(seed, 0));
  boost::random::uniform_real_distribution<double> log_gap(std::log(gap_min), std::log(gap_max));
  std::vector<double> means{1.0};
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = std::clamp(std::exp(log_gap(engine)), gap_min, gap_max);
    means.push_back(1.0 - gap);
  }
  return BanditInstance(std::move(means));
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 engine(mix_seed(seed, 0x5045524DULL));
  // std::shuffle's draw sequence is implementation-defined; this is not.
  for (std::size_t i = n; i > 1; --i) {
    boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(engine)]);
  }
  return perm;
}

BanditInstance apply_permutation(const BanditInstance& instance,
                                 std::span<const std::size_t> permutation) {
  const std::size_t n = instance.num_arms();
  if (permutation.size() != n) throw InvalidArgument("permutation length mismatch");
  std::vector<bool> seen(n, false);
  std::vector<double> means(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = permutation[i];
    if (src >= n || seen[src]) throw InvalidArgument("not a permutation");
    seen[src] = true;
    means[i] = instance.mean(src);
  }
  return BanditInstance(std::move(means), instance.name());
}

BanditInstance apply_permutation(const BanditInstance& instance, std::uint64_t permutation_seed) {
  const auto perm = random_permutation(instance.num_arms(), permutation_seed);
  return apply_permutation(instance, perm);
}

BanditInstance InstanceSpec::build() const {
  BanditInstance base = [&] {
    switch (family) {
      case Family::kTwoArm:
        return gen_two_arm(gap);
      case Family::kClustered:
        return gen_clustered(sizes, gaps, base_mean);
      case Family::kMaxEntropy:
        return gen_max_entropy(groups);
      case Family::kRandom:
        return gen_random(n, gap_min, gap_max, seed);
      case Family::kExplicit:
        return BanditInstance(means);
    }
    throw InvalidArgument("unhandled family");
  }();
  if (permutation_seed) base = apply_permutation(base, *permutation_seed);
  return base.renamed(name.value_or(label()));
}

std::string InstanceSpec::label() const {
  std::ostringstream out;
  out << to_string(family);
  switch (family) {
    case Family::kTwoArm:
      out << "(gap=" << gap << ")";
      break;
    case Family::kClustered:
      out << "(";
      for (std::size_t j = 0; j < sizes.size(); ++j) {
        out << (j ? "," : "") << sizes[j] << "@" << gaps[j];
      }
      out << ")";
      break;
    case Family::kMaxEntropy:
      out << "(m=" << groups << ")";
      break;
    case Family::kRandom:
      out << "(n=" << n << ",range=" << gap_min << ":" << gap_max << ",seed=" << seed << ")";
      break;
    case Family::kExplicit:
      out << "(n=" << means.size() << ")";
      break;
  }
  return out.str();
}

}  // namespace bai
