#include <array>
#include <string>

#include "bai/algorithms.hpp"
#include "bai/errors.hpp"

namespace bai {
namespace {

struct NamedAlgorithm {
  Algorithm algorithm;
  std::string_view name;
};

constexpr std::array<NamedAlgorithm, 6> kNames{{
    {Algorithm::kUniformSe, "uniform-se"},
    {Algorithm::kMedianElim, "median-elim"},
    {Algorithm::kExpGap, "exp-gap"},
    {Algorithm::kExpGapEntropyOracle, "exp-gap-entropy-oracle"},
    {Algorithm::kExpGapEntropyAdaptive, "exp-gap-entropy-adaptive"},
    {Algorithm::kLilUcb, "lil-ucb"},
}};

constexpr std::array<Algorithm, 6> kAll{
    Algorithm::kUniformSe,           Algorithm::kMedianElim,
    Algorithm::kExpGap,              Algorithm::kExpGapEntropyOracle,
    Algorithm::kExpGapEntropyAdaptive, Algorithm::kLilUcb,
};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& entry : kNames) {
    if (entry.algorithm == algorithm) return entry.name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& entry : kNames) {
    if (entry.name == name) return entry.algorithm;
  }
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

std::span<const Algorithm> all_algorithms() { return kAll; }

BaiResult run_algorithm(Algorithm algorithm, SampleOracle& oracle, const BanditInstance& truth,
                        double delta, const AlgorithmParams& params) {
  switch (algorithm) {
    case Algorithm::kUniformSe:
      return uniform_se(oracle, delta);
    case Algorithm::kMedianElim:
      return median_elimination_run(oracle, params.median_epsilon, delta);
    case Algorithm::kExpGap:
      return exp_gap_elimination(oracle, delta, AllocationScheme::kFixedQuadratic,
                                 params.elimination);
    case Algorithm::kExpGapEntropyOracle:
      return entropy_elim_oracle(oracle, truth, delta, params.elimination);
    case Algorithm::kExpGapEntropyAdaptive:
      return entropy_elim_adaptive(oracle, delta, params.elimination);
    case Algorithm::kLilUcb:
      return lil_ucb(oracle, delta, params.lil);
  }
  throw InvalidArgument("unhandled algorithm");
}

}  // namespace bai
