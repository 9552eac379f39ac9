#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bai/core_model.hpp"

namespace bai {

// Largest group count accepted by gen_max_entropy (n = 1 + (4^m - 1) / 3).
inline constexpr int kMaxEntropyGroupCap = 10;

enum class Family { kTwoArm, kClustered, kMaxEntropy, kRandom, kExplicit };

// Declarative description of an instance; build() materializes it.
struct InstanceSpec {
  Family family = Family::kTwoArm;
  double gap = 0.5;                  // two-arm
  std::vector<std::size_t> sizes;    // clustered
  std::vector<double> gaps;          // clustered
  double base_mean = 1.0;            // clustered
  int groups = 1;                    // max-entropy
  std::size_t n = 2;                 // random
  double gap_min = 0.01;             // random
  double gap_max = 1.0;              // random
  std::uint64_t seed = 0;            // random
  std::vector<double> means;         // explicit
  std::optional<std::uint64_t> permutation_seed;
  std::optional<std::string> name;

  [[nodiscard]] BanditInstance build() const;
  // Stable label such as "max-entropy(m=3)", used when no name is given.
  [[nodiscard]] std::string label() const;
};

[[nodiscard]] std::string_view to_string(Family family);
[[nodiscard]] Family parse_family(std::string_view name);

// means [1, 1 - gap].
[[nodiscard]] BanditInstance gen_two_arm(double gap);

// One best arm at base_mean followed by sizes[j] arms at base_mean - gaps[j].
[[nodiscard]] BanditInstance gen_clustered(std::span<const std::size_t> sizes,
                                           std::span<const double> gaps, double base_mean = 1.0);

// 4^(m-k) arms at gap 2^-k for k = 1..m, so every group weighs exactly 4^m
// and the gap entropy is ln m.
[[nodiscard]] BanditInstance gen_max_entropy(int m);

// Best arm at 1.0 and n - 1 gaps drawn log-uniformly from [gap_min, gap_max].
[[nodiscard]] BanditInstance gen_random(std::size_t n, double gap_min, double gap_max,
                                        std::uint64_t seed);

// Reorders arms so that result.mean(i) == instance.mean(permutation[i]).
[[nodiscard]] BanditInstance apply_permutation(const BanditInstance& instance,
                                               std::span<const std::size_t> permutation);
// Uniformly random permutation (Fisher-Yates) drawn from the seed.
[[nodiscard]] BanditInstance apply_permutation(const BanditInstance& instance,
                                               std::uint64_t permutation_seed);
[[nodiscard]] std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

}  // namespace bai
