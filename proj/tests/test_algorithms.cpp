#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "doctest.h"

#include "bai/algorithms.hpp"
#include "bai/errors.hpp"
#include "bai/generators.hpp"

using namespace bai;

namespace {

using Strategy = std::function<BaiResult(SampleOracle&, const BanditInstance&, double)>;

struct Tally {
  int trials = 0;
  int correct = 0;
  int aborted = 0;
  double mean_samples = 0.0;
};

Tally tally(const BanditInstance& inst, const Strategy& run, double delta, int trials,
            std::uint64_t base_seed = 0) {
  Tally t;
  t.trials = trials;
  for (int i = 0; i < trials; ++i) {
    SampleOracle oracle(inst, mix_seed(base_seed, static_cast<std::uint64_t>(i)));
    const BaiResult r = run(oracle, inst, delta);
    if (r.aborted) {
      ++t.aborted;
    } else if (r.selected == inst.best_arm()) {
      ++t.correct;
    }
    CHECK(r.total_samples == oracle.total_pulls());
    t.mean_samples += static_cast<double>(r.total_samples) / trials;
  }
  return t;
}

double error_rate(const Tally& t) {
  return static_cast<double>(t.trials - t.correct - t.aborted) / t.trials;
}

Strategy by_name(Algorithm a) {
  return [a](SampleOracle& o, const BanditInstance& truth, double delta) {
    return run_algorithm(a, o, truth, delta);
  };
}

BanditInstance dominant(std::size_t n) {
  std::vector<double> means(n, 0.0);
  means[0] = 1.0;
  return BanditInstance(means);
}

const BanditInstance kTwoArm = gen_two_arm(0.5);

}  // namespace

TEST_CASE("uniform successive elimination") {
  const Strategy se = by_name(Algorithm::kUniformSe);
  CHECK(error_rate(tally(kTwoArm, se, 0.1, 1000)) <= 0.1);
  const Tally dom = tally(dominant(10), se, 0.1, 300);
  CHECK(dom.correct >= 270);

  SampleOracle far(BanditInstance({100.0, 0.0}), 1);
  const BaiResult r = uniform_se(far, 0.1);
  CHECK(r.selected == 0);
  CHECK(r.total_samples == 2);
  REQUIRE(r.rounds.size() == 1);
  CHECK(r.rounds[0].round == 1);
}

TEST_CASE("median elimination") {
  SUBCASE("a single arm needs no pulls") {
    SampleOracle oracle(kTwoArm, 0);
    const std::vector<std::size_t> one{1};
    CHECK(median_elimination(oracle, one, 0.1, 0.1) == 1);
    CHECK(oracle.total_pulls() == 0);
  }
  SUBCASE("two arms") {
    const BanditInstance inst({1.0, 0.1});
    const Strategy me = [](SampleOracle& o, const BanditInstance&, double delta) {
      return median_elimination_run(o, 0.5, delta);
    };
    CHECK(tally(inst, me, 0.1, 1000).correct >= 900);
  }
  SUBCASE("samples grow linearly in n") {
    auto cost = [](std::size_t n) {
      std::vector<double> means(n, 0.5);
      means[n / 3] = 1.0;
      const BanditInstance inst(means);
      double total = 0.0;
      for (std::uint64_t s = 0; s < 200; ++s) {
        SampleOracle o(inst, s);
        (void)median_elimination(o, 0.25, 0.1);
        total += static_cast<double>(o.total_pulls());
      }
      return total / 200.0;
    };
    const double ratio = cost(128) / cost(64);
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
  }
  SUBCASE("trace halves the field") {
    SampleOracle o(gen_max_entropy(3), 4);
    const BaiResult r = median_elimination_run(o, 0.1, 0.1);
    std::size_t alive = 22;
    for (const auto& round : r.rounds) {
      CHECK(round.alive_before == alive);
      alive = (alive + 1) / 2;
      CHECK(round.alive_after == alive);
    }
    CHECK(alive == 1);
  }
  SUBCASE("bad parameters") {
    SampleOracle o(kTwoArm, 0);
    CHECK_THROWS_AS((void)median_elimination(o, 0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS((void)median_elimination(o, 0.1, 0.0), InvalidDelta);
    CHECK_THROWS_AS((void)median_elimination(o, std::vector<std::size_t>{}, 0.1, 0.1),
                    InvalidArgument);
  }
}

TEST_CASE("exponential-gap elimination") {
  const Strategy eg = by_name(Algorithm::kExpGap);
  CHECK(error_rate(tally(kTwoArm, eg, 0.1, 1000)) <= 0.1);

  const double wide = tally(kTwoArm, eg, 0.1, 500, 11).mean_samples;
  const double narrow = tally(gen_two_arm(0.25), eg, 0.1, 500, 11).mean_samples;
  CHECK(narrow / wide >= 2.5);
  CHECK(narrow / wide <= 6.5);

  for (std::uint64_t s = 0; s < 50; ++s) {
    SampleOracle o(gen_max_entropy(3), s);
    const BaiResult r = exp_gap_elimination(o, 0.05, AllocationScheme::kFixedQuadratic);
    double spent = 0.0;
    std::uint64_t samples = 0;
    for (const auto& round : r.rounds) {
      spent += round.delta;
      samples += round.samples;
      CHECK(round.target_gap == std::ldexp(1.0, -round.round));
    }
    CHECK(spent <= 0.05);
    CHECK(samples == r.total_samples);
  }

  SampleOracle o(kTwoArm, 0);
  CHECK_THROWS_AS((void)exp_gap_elimination(o, 0.1, AllocationScheme::kOracleEntropy),
                  InvalidArgument);
}

TEST_CASE("exponential-gap elimination respects the budget cap") {
  SampleOracle o(gen_max_entropy(3), 0, 1000);
  const BaiResult r = exp_gap_elimination(o, 0.1, AllocationScheme::kFixedQuadratic);
  CHECK(r.aborted);
  CHECK(!r.abort_reason.empty());
  CHECK(o.total_pulls() <= 1000);
}

TEST_CASE("entropy-oracle elimination") {
  SUBCASE("one group") {
    const BanditInstance inst = gen_clustered(std::vector<std::size_t>{31},
                                              std::vector<double>{0.25});
    SampleOracle o(inst, 8);
    const BaiResult r = entropy_elim_oracle(o, inst, 0.05);
    CHECK(r.selected == inst.best_arm());
    REQUIRE(r.rounds.size() >= 2);
    CHECK(r.rounds[1].delta == doctest::Approx(0.05).epsilon(0.02));
  }
  SUBCASE("max-entropy instance") {
    const BanditInstance inst = gen_max_entropy(4);
    REQUIRE(inst.num_arms() == 86);
    const Strategy oracle = by_name(Algorithm::kExpGapEntropyOracle);
    const Strategy fixed = by_name(Algorithm::kExpGap);
    const Tally a = tally(inst, oracle, 0.01, 1000, 5);
    CHECK(error_rate(a) <= 0.01);
    const Tally b = tally(inst, fixed, 0.01, 1000, 5);
    CHECK(a.mean_samples <= b.mean_samples);
  }
  SUBCASE("truth must match the oracle") {
    SampleOracle o(kTwoArm, 0);
    CHECK_THROWS_AS((void)entropy_elim_oracle(o, gen_max_entropy(2), 0.1), TruthMismatch);
  }
}

TEST_CASE("adaptive entropy elimination") {
  const Strategy ad = by_name(Algorithm::kExpGapEntropyAdaptive);
  CHECK(error_rate(tally(kTwoArm, ad, 0.1, 1000)) <= 0.1);
  const BanditInstance clustered = gen_clustered(std::vector<std::size_t>{31},
                                                 std::vector<double>{0.25});
  CHECK(error_rate(tally(clustered, ad, 0.05, 300)) <= 0.05);

  const BanditInstance me = gen_max_entropy(4);
  const double adaptive = tally(me, ad, 0.01, 200, 9).mean_samples;
  const double oracle = tally(me, by_name(Algorithm::kExpGapEntropyOracle), 0.01, 200, 9).mean_samples;
  CHECK(adaptive <= 3.0 * oracle);

  SampleOracle o(kTwoArm, 2);
  const BaiResult r = entropy_elim_adaptive(o, 0.1);
  CHECK(r.heuristic);
  double spent = 0.0;
  for (const auto& round : r.rounds) spent += round.delta;
  CHECK(spent <= 0.1);
}

TEST_CASE("lil'UCB") {
  CHECK(lil_ucb_confidence(3, 0.01, 1.0, 0.005) == doctest::Approx(4.195562245959725).epsilon(1e-13));

  for (double delta : {0.1, 0.01}) {
    const double c = (2.0 + 0.01) / 0.01 * std::pow(1.0 / std::log(1.01), 1.01);
    const double dt = lil_ucb_delta_tilde(delta, 0.01);
    CHECK(4.0 * std::sqrt(c * dt) + 4.0 * c * dt == doctest::Approx(delta).epsilon(1e-12));
  }

  const Strategy lil = by_name(Algorithm::kLilUcb);
  CHECK(error_rate(tally(kTwoArm, lil, 0.1, 1000)) <= 0.1);
  CHECK(tally(dominant(8), lil, 0.05, 200).correct >= 190);

  SampleOracle o(kTwoArm, 0, 50);
  const BaiResult capped = lil_ucb(o, 0.1);
  CHECK(capped.aborted);
  CHECK(o.total_pulls() <= 50);
}

TEST_CASE("best arm survives every round") {
  const BanditInstance inst = gen_max_entropy(3);
  for (Algorithm a : {Algorithm::kUniformSe, Algorithm::kExpGap, Algorithm::kExpGapEntropyOracle,
                      Algorithm::kExpGapEntropyAdaptive}) {
    int dropped = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      SampleOracle o(inst, s);
      const BaiResult r = run_algorithm(a, o, inst, 0.1);
      for (const auto& round : r.rounds) {
        const auto& alive = round.survivors;
        if (std::find(alive.begin(), alive.end(), inst.best_arm()) == alive.end()) {
          ++dropped;
          break;
        }
      }
    }
    CHECK(dropped <= 20);
  }
}

TEST_CASE("registry") {
  CHECK(all_algorithms().size() == 6);
  for (Algorithm a : all_algorithms()) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK(to_string(Algorithm::kExpGap) == "exp-gap");
  CHECK_THROWS_AS((void)parse_algorithm("thompson"), InvalidArgument);
  for (Algorithm a : all_algorithms()) {
    SampleOracle o(kTwoArm, 1);
    const BaiResult r = run_algorithm(a, o, kTwoArm, 0.1);
    CHECK(r.selected == 0);
    CHECK(r.total_samples > 0);
    CHECK(r.heuristic == (a == Algorithm::kExpGapEntropyAdaptive));
  }
}
