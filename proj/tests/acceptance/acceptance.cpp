// Acceptance suite: runs each acceptance criterion at its stated size and
// tolerance and prints one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (0 when all pass).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bai/algorithms.hpp"
#include "bai/cli.hpp"
#include "bai/core_model.hpp"
#include "bai/generators.hpp"
#include "bai/harness.hpp"
#include "bai/sampling.hpp"

using namespace bai;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

unsigned worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

TrialOptions trial_options(std::size_t trials, std::uint64_t seed) {
  TrialOptions o;
  o.trials = trials;
  o.seed = seed;
  o.threads = worker_count();
  return o;
}

TrialAlgorithm bound(Algorithm a) {
  return [a](SampleOracle& o, const BanditInstance& truth, double delta) {
    return run_algorithm(a, o, truth, delta);
  };
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Verdict allocation_identity() {
  Verdict v;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> length(1, 20);
  std::uniform_real_distribution<double> log_weight(-3.0, 3.0);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int beaten = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> h(static_cast<std::size_t>(length(rng)));
    for (double& w : h) w = std::exp(log_weight(rng));
    const double total = std::accumulate(h.begin(), h.end(), 0.0);
    double ent = 0.0;
    for (double w : h) ent -= (w / total) * std::log(w / total);
    for (double delta : {0.1, 0.01}) {
      const double best = allocation_objective(h, optimal_allocation(h, delta).deltas);
      worst = std::max(worst, std::abs(best - total * (std::log(1.0 / delta) + ent)));
      for (int r = 0; r < 1000; ++r) {
        std::vector<double> d(h.size());
        for (double& x : d) x = expo(rng);
        const double s = delta * (0.5 + 0.5 * unit(rng)) / std::accumulate(d.begin(), d.end(), 0.0);
        for (double& x : d) x *= s;
        if (allocation_objective(h, d) < best) ++beaten;
      }
    }
  }
  v.pass = worst <= 1e-9 && beaten == 0;
  v.detail = fmt("max |objective - H(ln 1/delta + Ent)| = %.3g; random allocations beating it: %.0f",
                 worst, beaten);
  return v;
}

Verdict entropy_values() {
  Verdict v;
  double worst = 0.0;
  bool equal_weights = true;
  for (int m = 1; m <= 6; ++m) {
    const GroupDecomposition d = decompose(gap_profile(gen_max_entropy(m)));
    worst = std::max(worst, std::abs(d.entropy_nat - std::log(m)));
    for (const auto& [k, g] : d.groups) equal_weights &= g.weight == std::ldexp(1.0, 2 * m);
    equal_weights &= d.num_groups() == static_cast<std::size_t>(m);
  }
  const BanditInstance ln2({1.0, 0.5, 0.5, 0.5, 0.5, 0.75});
  const double ent = gap_entropy(ln2);
  const double conj = complexity_bounds(ln2, 0.1).conjectured;
  const double expected = 32.0 * (std::log(10.0) + std::log(2.0));
  v.pass = worst <= 1e-12 && equal_weights && std::abs(ent - std::log(2.0)) <= 1e-12 &&
           std::abs(conj - expected) <= 1e-6 && std::round(conj * 1000.0) == 95863.0;
  v.detail = fmt("max |Ent - ln m| = %.3g; ln 2 instance Ent = %.12f, conjectured = %.6f", worst,
                 ent, conj);
  if (!equal_weights) v.detail += "; unequal H_k";
  return v;
}

Verdict delta_correctness() {
  Verdict v;
  const std::vector<std::pair<std::string, BanditInstance>> instances{
      {"two-arm(0.5)", gen_two_arm(0.5)},
      {"clustered(31@0.25)", gen_clustered(std::vector<std::size_t>{31}, std::vector<double>{0.25})},
      {"max-entropy(3)", gen_max_entropy(3)}};
  int cells = 0;
  int failed = 0;
  std::ostringstream worst;
  for (const auto& [name, inst] : instances) {
    for (Algorithm a : all_algorithms()) {
      for (double delta : {0.1, 0.05}) {
        const TrialSummary s = run_trials(inst, name, bound(a), delta, trial_options(1000, 4242));
        ++cells;
        const double limit = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / 1000.0);
        if (!s.meets_delta() || s.aborts > 0) {
          ++failed;
          worst << " " << name << "/" << to_string(a) << "@" << delta << " error_rate=" << s.error_rate
                << " limit=" << limit << " aborts=" << s.aborts << ";";
        }
      }
    }
  }
  v.pass = failed == 0;
  v.detail = std::to_string(cells - failed) + "/" + std::to_string(cells) +
             " (instance, algorithm, delta) cells within delta + 3 sigma over 1000 trials" +
             worst.str();
  return v;
}

Verdict gap_scaling() {
  Verdict v;
  const TrialSummary wide =
      run_trials(gen_two_arm(0.5), "w", bound(Algorithm::kExpGap), 0.1, trial_options(500, 77));
  const TrialSummary narrow =
      run_trials(gen_two_arm(0.25), "n", bound(Algorithm::kExpGap), 0.1, trial_options(500, 77));
  const double ratio = narrow.mean_samples / wide.mean_samples;
  v.pass = ratio >= 2.5 && ratio <= 6.5;
  v.detail = fmt("mean samples %.6g (gap 0.25) / %.6g (gap 0.5) = %.4f, band [2.5, 6.5]",
                 narrow.mean_samples, wide.mean_samples, ratio);
  return v;
}

Verdict entropy_advantage() {
  Verdict v;
  ExperimentConfig c;
  InstanceSpec spec;
  spec.family = Family::kMaxEntropy;
  spec.groups = 4;
  c.instance = spec;
  c.algorithms = {Algorithm::kExpGapEntropyOracle, Algorithm::kExpGap};
  c.deltas = {0.01};
  c.trials = 500;
  c.seed = 2025;
  c.threads = worker_count();
  const ComparisonTable t = compare_suite(c);
  const double oracle = t.rows[0].mean_samples;
  const double fixed = t.rows[1].mean_samples;
  v.pass = oracle <= fixed && t.rows[0].aborts == 0 && t.rows[1].aborts == 0;
  v.detail = fmt("oracle-entropy %.6g vs fixed-quadratic %.6g mean samples (ratio %.4f)", oracle,
                 fixed, oracle / fixed);
  return v;
}

Verdict conjecture_shape() {
  Verdict v;
  const std::vector<int> ms{1, 2, 3, 4};
  const ProbeTable table =
      entropy_scaling_probe(ms, Algorithm::kExpGapEntropyOracle, 0.01, trial_options(200, 606));
  v.pass = table.ratio_spread <= 4.0;
  std::ostringstream d;
  d << "bound_ratio by m:";
  for (const auto& row : table.rows) d << " " << row.m << "->" << row.bound_ratio;
  d << "; max/min = " << table.ratio_spread << " (limit 4)";
  v.detail = d.str();
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict reproducibility() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "bai_acceptance_repro";
  std::filesystem::create_directories(dir);
  auto run = [&](const std::string& tag, const char* threads) {
    const std::string out = (dir / tag).string();
    const char* argv[] = {"bai", "compare", "--instance", "gen:max-entropy:m=3", "--algo", "exp-gap",
                          "--algo", "exp-gap-entropy-oracle", "--algo", "lil-ucb", "--delta", "0.05",
                          "--trials", "200", "--seed", "99", "--threads", threads, "--out",
                          out.c_str()};
    std::ostringstream sink;
    const int code = bai::cli::run(static_cast<int>(std::size(argv)), argv, sink, sink);
    return std::make_pair(code, slurp(out + ".csv") + slurp(out + ".json"));
  };
  const auto a = run("a", "1");
  const auto b = run("b", "1");
  const auto c = run("c", "8");
  v.pass = a.first == 0 && b.first == 0 && c.first == 0 && !a.second.empty() &&
           a.second == b.second && a.second == c.second;
  v.detail = std::string("repeat run ") + (a.second == b.second ? "identical" : "DIFFERENT") +
             ", 1 vs 8 threads " + (a.second == c.second ? "identical" : "DIFFERENT");
  return v;
}

Verdict sampling_calibration() {
  Verdict v;
  const double critical = 1.6276 / std::sqrt(1e4);
  const BanditInstance inst({0.3, -0.2});
  int ks_pass = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SampleOracle o(inst, seed);
    std::vector<double> xs = o.pull(0, 10000);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = 0.5 * std::erfc(-(xs[i] - 0.3) / std::sqrt(2.0));
      d = std::max({d, (i + 1) / 1e4 - f, f - i / 1e4});
    }
    if (d < critical) ++ks_pass;
  }
  const double radius = confidence_radius(100, 0.1);
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    SampleOracle o(inst, 50000 + seed);
    if (std::abs(o.pull_sum(0, 100) / 100.0 - 0.3) <= radius) ++covered;
  }
  v.pass = ks_pass >= 95 && covered >= 9000;
  v.detail = fmt("KS passes at 1%% for %.0f/100 seeds; radius coverage %.4f (need >= 0.9)",
                 ks_pass, covered / 1e4);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 allocation identity", allocation_identity},
      {"2 entropy oracle values", entropy_values},
      {"3 delta-correctness", delta_correctness},
      {"4 gap scaling", gap_scaling},
      {"5 entropy-aware advantage", entropy_advantage},
      {"6 conjecture-shape probe", conjecture_shape},
      {"7 reproducibility and parallelism", reproducibility},
      {"8 sampling calibration", sampling_calibration},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = check();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s  %s  (%.1fs)  %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
