#include "bai/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bai/errors.hpp"
#include "bai/generators.hpp"
#include "bai/harness.hpp"
#include "bai/instance_io.hpp"

namespace bai::cli {
namespace {

using nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string family;
  double gap = 0.5;
  std::vector<std::size_t> sizes;
  std::vector<double> gaps;
  double base_mean = 1.0;
  int m = 1;
  std::size_t n = 2;
  double gap_min = 0.01;
  double gap_max = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> permutation_seed;
  std::optional<std::string> name;
  std::string out;
};

int cmd_gen(const GenArgs& args, std::ostream& out) {
  InstanceSpec spec;
  spec.family = parse_family(args.family);
  if (spec.family == Family::kExplicit) {
    throw InvalidArgument("gen cannot build explicit instances; write the JSON directly");
  }
  spec.gap = args.gap;
  spec.sizes = args.sizes;
  spec.gaps = args.gaps;
  spec.base_mean = args.base_mean;
  spec.groups = args.m;
  spec.n = args.n;
  spec.gap_min = args.gap_min;
  spec.gap_max = args.gap_max;
  spec.seed = args.seed;
  spec.permutation_seed = args.permutation_seed;
  spec.name = args.name;
  const BanditInstance instance = spec.build();

  ordered_json doc;
  doc["name"] = *instance.name();
  doc["means"] = std::vector<double>(instance.means().begin(), instance.means().end());
  doc["variance"] = instance.variance();
  ordered_json meta;
  meta["tool_version"] = std::string(kToolVersion);
  meta["seed"] = spec.seed;
  meta["config_hash"] = fnv1a_hex(spec_to_json(spec).dump());
  meta["generator"] = spec_to_json(spec);
  doc["metadata"] = meta;
  const std::string body = doc.dump(2) + "\n";

  if (args.out.empty() || args.out == "-") {
    out << body;
  } else {
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + args.out);
    file << body;
    out << "wrote " << args.out << " (" << instance.num_arms() << " arms)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const std::string& path, double delta, const std::string& json_out,
                std::ostream& out) {
  const BanditInstance instance = load_instance(path);
  const GapProfile profile = gap_profile(instance);
  const GroupDecomposition groups = decompose(profile);
  const ComplexityBounds bounds = complexity_bounds(profile, groups, delta);

  out << "instance: " << instance.name().value_or(path) << "\n";
  out << "n: " << instance.num_arms() << " (best arm index " << profile.best_index << ")\n";
  out << "gaps: min " << short_num(profile.gaps.front()) << ", max "
      << short_num(profile.gaps.back()) << " [";
  const std::size_t shown = std::min<std::size_t>(profile.gaps.size(), 12);
  for (std::size_t j = 0; j < shown; ++j) out << (j ? ", " : "") << short_num(profile.gaps[j]);
  if (shown < profile.gaps.size()) out << ", ... (" << profile.gaps.size() << " total)";
  out << "]\n";
  out << "groups (k, |G_k|, H_k, p_k):\n";
  for (const auto& [k, g] : groups.groups) {
    out << "  k=" << k << "  size=" << g.ranks.size() << "  H=" << short_num(g.weight)
        << "  p=" << fixed6(g.prob) << "\n";
  }
  out << "H_total: " << short_num(groups.total_weight) << "\n";
  out << "entropy_nats: " << fixed6(groups.entropy_nat) << "\n";
  out << "entropy_bits: " << fixed6(groups.entropy_bits()) << "\n";
  out << "bounds at delta=" << short_num(delta) << ":\n";
  out << "  mt: " << fixed6(bounds.mt) << "\n";
  out << "  kks_jmns: " << fixed6(bounds.kks_jmns) << "\n";
  out << "  eq1: " << fixed6(bounds.eq1) << "\n";
  out << "  eq2_clustered: " << fixed6(bounds.eq2_clustered) << "\n";
  out << "  conjectured: " << fixed6(bounds.conjectured) << "\n";

  if (!json_out.empty()) {
    ordered_json doc;
    doc["instance"] = instance.name().value_or(path);
    doc["n"] = instance.num_arms();
    doc["best_index"] = profile.best_index;
    doc["gaps"] = profile.gaps;
    doc["groups"] = ordered_json::array();
    for (const auto& [k, g] : groups.groups) {
      ordered_json entry;
      entry["k"] = k;
      entry["size"] = g.ranks.size();
      entry["H"] = g.weight;
      entry["p"] = g.prob;
      doc["groups"].push_back(entry);
    }
    doc["H_total"] = groups.total_weight;
    doc["entropy_nats"] = groups.entropy_nat;
    doc["entropy_bits"] = groups.entropy_bits();
    doc["delta"] = delta;
    doc["bounds"] = {{"mt", bounds.mt},
                     {"kks_jmns", bounds.kks_jmns},
                     {"eq1", bounds.eq1},
                     {"eq2_clustered", bounds.eq2_clustered},
                     {"conjectured", bounds.conjectured}};
    ordered_json meta;
    meta["tool_version"] = std::string(kToolVersion);
    meta["seed"] = nullptr;
    meta["config_hash"] =
        fnv1a_hex(instance_to_json(instance).dump() + "|" + std::to_string(delta));
    doc["metadata"] = meta;
    std::ofstream file(json_out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + json_out);
    file << doc.dump(2) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run / compare / probe

struct ExperimentFlags {
  std::string config;
  std::string instance;
  std::vector<std::string> algos;
  std::vector<double> deltas;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool permute = true;
  std::uint64_t budget_cap = kDefaultBudgetCap;
  unsigned threads = 1;
  std::string out = "results";
  std::string format = "both";
  double epsilon = 0.1;
  std::vector<int> m_list;

  CLI::App* app = nullptr;
  [[nodiscard]] bool given(const char* flag) const { return app->count(flag) > 0; }
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f, bool multi_algo) {
  f.app = sub;
  if (multi_algo) {
    sub->add_option("--config", f.config, "Experiment config JSON");
    sub->add_option("--instance", f.instance,
                    "Instance JSON file, or gen:<family>:<key=value,...>");
    sub->add_option("--algo", f.algos, "Algorithm (repeatable)");
    sub->add_option("--delta", f.deltas, "Confidence parameter (repeatable; default 0.01)");
  } else {
    sub->add_option("--algo", f.algos, "Algorithm")->expected(1);
    sub->add_option("--delta", f.deltas, "Confidence parameter (default 0.01)")->expected(1);
    sub->add_option("--m-list", f.m_list, "Group counts, e.g. 1,2,3,4")
        ->delimiter(',')
        ->required();
  }
  sub->add_option("--trials", f.trials, "Trials per cell (default 1000)");
  sub->add_option("--seed", f.seed, "Master seed");
  sub->add_flag("--permute,!--no-permute", f.permute, "Fresh random arm order per trial (default on)");
  sub->add_option("--budget-cap", f.budget_cap, "Maximum pulls per run");
  sub->add_option("--threads", f.threads, "Worker threads");
  sub->add_option("--out", f.out, "Output path prefix (default results)");
  sub->add_option("--format", f.format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  sub->add_option("--epsilon", f.epsilon, "Accuracy for median-elim (default 0.1)");
}

ExperimentConfig build_config(const ExperimentFlags& f) {
  ExperimentConfig config;
  if (!f.config.empty()) config = load_config(f.config);
  if (f.config.empty() || f.given("--instance")) {
    if (f.instance.empty()) throw ConfigError("--instance or --config is required");
    if (f.instance.rfind("gen:", 0) == 0) {
      try {
        config.instance = parse_spec_string(f.instance.substr(4));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    } else {
      config.instance = std::filesystem::path(f.instance);
    }
  }
  const bool fresh = f.config.empty();
  if (fresh || f.given("--algo")) {
    config.algorithms.clear();
    for (const auto& name : f.algos) {
      try {
        config.algorithms.push_back(parse_algorithm(name));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (fresh || f.given("--delta")) {
    config.deltas = f.deltas.empty() ? std::vector<double>{0.01} : f.deltas;
  }
  if (fresh || f.given("--trials")) config.trials = f.trials;
  if (fresh || f.given("--seed")) config.seed = f.seed;
  if (fresh || f.given("--permute") || f.given("--no-permute")) config.permute = f.permute;
  if (fresh || f.given("--budget-cap")) config.budget_cap = f.budget_cap;
  if (fresh || f.given("--threads")) config.threads = f.threads;
  if (fresh || f.given("--out")) config.out = f.out;
  if (fresh || f.given("--format")) config.format = parse_output_format(f.format);
  if (fresh || f.given("--epsilon")) config.params.median_epsilon = f.epsilon;
  config.validate();
  return config;
}

void print_rows(const std::vector<TrialSummary>& rows, std::ostream& out) {
  for (const auto& r : rows) {
    out << r.algorithm << " delta=" << short_num(r.delta) << " trials=" << r.trials
        << " errors=" << r.errors << " error_rate=" << short_num(r.error_rate)
        << " aborts=" << r.aborts << " mean_samples=" << short_num(r.mean_samples)
        << " bound_ratio=" << short_num(r.bound_ratio) << (r.heuristic ? " [heuristic]" : "")
        << "\n";
  }
}

bool all_aborted(const std::vector<TrialSummary>& rows) {
  for (const auto& r : rows) {
    if (r.aborts < r.trials) return false;
  }
  return !rows.empty();
}

void report_written(const std::vector<std::filesystem::path>& paths, std::ostream& out) {
  for (const auto& p : paths) out << "wrote " << p.string() << "\n";
}

int cmd_run(const ExperimentFlags& f, std::ostream& out) {
  const ExperimentConfig config = build_config(f);
  const auto rows = run_trials(config);
  print_rows(rows, out);
  const RunMetadata meta = metadata_for(config);
  report_written(write_text_outputs(config.out, config.format, results_csv(rows, meta),
                                    results_json(rows, meta)),
                 out);
  return all_aborted(rows) ? kExitAborted : kExitOk;
}

int cmd_compare(const ExperimentFlags& f, std::ostream& out) {
  const ExperimentConfig config = build_config(f);
  const ComparisonTable table = compare_suite(config);
  print_rows(table.rows, out);
  for (const auto& [delta, names] : table.ranking) {
    out << "ranking delta=" << short_num(delta) << ":";
    for (const auto& name : names) out << " " << name;
    out << "\n";
  }
  const RunMetadata meta = metadata_for(config);
  report_written(write_text_outputs(config.out, config.format, results_csv(table.rows, meta),
                                    results_json(table.rows, meta, &table)),
                 out);
  return all_aborted(table.rows) ? kExitAborted : kExitOk;
}

int cmd_probe(const ExperimentFlags& f, std::ostream& out) {
  Algorithm algorithm = Algorithm::kExpGapEntropyOracle;
  if (!f.algos.empty()) {
    try {
      algorithm = parse_algorithm(f.algos.front());
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  const double delta = f.deltas.empty() ? 0.01 : f.deltas.front();
  if (!(delta > 0.0 && delta <= 0.5)) throw ConfigError("delta must lie in (0, 0.5]");
  if (f.trials < 1) throw ConfigError("trials must be at least 1");
  if (f.threads < 1) throw ConfigError("threads must be at least 1");
  for (int m : f.m_list) {
    if (m < 1 || m > kMaxEntropyGroupCap) throw ConfigError("--m-list entries must be in 1..10");
  }
  TrialOptions options;
  options.trials = f.trials;
  options.seed = f.seed;
  options.permute = f.permute;
  options.budget_cap = f.budget_cap;
  options.threads = f.threads;
  AlgorithmParams params;
  params.median_epsilon = f.epsilon;

  const ProbeTable table = entropy_scaling_probe(f.m_list, algorithm, delta, options, params);
  out << "m  entropy_nats  H_total  mean_samples  bound_ratio\n";
  for (const auto& row : table.rows) {
    out << row.m << "  " << fixed6(row.entropy_nats) << "  " << short_num(row.total_weight)
        << "  " << short_num(row.mean_samples) << "  " << short_num(row.bound_ratio) << "\n";
  }
  out << "bound_ratio max/min: " << short_num(table.ratio_spread) << "\n";

  nlohmann::json reproducible;
  reproducible["m_list"] = f.m_list;
  reproducible["algorithm"] = std::string(to_string(algorithm));
  reproducible["delta"] = delta;
  reproducible["trials"] = f.trials;
  reproducible["seed"] = f.seed;
  reproducible["permute"] = f.permute;
  reproducible["budget_cap"] = f.budget_cap;
  reproducible["epsilon"] = f.epsilon;
  RunMetadata meta;
  meta.seed = f.seed;
  meta.config_hash = fnv1a_hex(reproducible.dump());
  if (algorithm == Algorithm::kExpGapEntropyAdaptive) {
    meta.heuristic_algorithms.emplace_back(to_string(algorithm));
  }
  report_written(write_text_outputs(f.out, parse_output_format(f.format), probe_csv(table, meta),
                                    probe_json(table, meta)),
                 out);
  bool every_aborted = !table.rows.empty();
  for (const auto& row : table.rows) every_aborted &= row.summary.aborts == row.summary.trials;
  return every_aborted ? kExitAborted : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best-arm identification laboratory: gap entropy, bounds and Monte Carlo trials",
               "bai"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance JSON file");
  gen_cmd->add_option("--family", gen.family, "two-arm, clustered, max-entropy or random")
      ->required();
  gen_cmd->add_option("--gap", gen.gap, "two-arm gap");
  gen_cmd->add_option("--sizes", gen.sizes, "clustered group sizes")->delimiter(',');
  gen_cmd->add_option("--gaps", gen.gaps, "clustered group gaps")->delimiter(',');
  gen_cmd->add_option("--base-mean", gen.base_mean, "clustered best-arm mean");
  gen_cmd->add_option("--m", gen.m, "max-entropy group count");
  gen_cmd->add_option("--n", gen.n, "random arm count");
  gen_cmd->add_option("--gap-min", gen.gap_min, "random smallest gap");
  gen_cmd->add_option("--gap-max", gen.gap_max, "random largest gap");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--permutation-seed", gen.permutation_seed, "shuffle arms with this seed");
  gen_cmd->add_option("--name", gen.name, "instance name");
  gen_cmd->add_option("--out", gen.out, "output file (default stdout)");

  std::string analyze_instance;
  double analyze_delta = 0.01;
  std::string analyze_json;
  auto* analyze_cmd = app.add_subcommand("analyze", "Report groups, gap entropy and bounds");
  analyze_cmd->add_option("--instance", analyze_instance, "Instance JSON file")->required();
  analyze_cmd->add_option("--delta", analyze_delta, "Confidence parameter (default 0.01)");
  analyze_cmd->add_option("--json", analyze_json, "Also write the report as JSON");

  ExperimentFlags run_flags;
  add_experiment_flags(app.add_subcommand("run", "Run Monte Carlo trials"), run_flags, true);
  ExperimentFlags compare_flags;
  add_experiment_flags(app.add_subcommand("compare", "Paired comparison of >= 2 algorithms"),
                       compare_flags, true);
  ExperimentFlags probe_flags;
  add_experiment_flags(app.add_subcommand("probe", "Entropy scaling probe over max-entropy instances"),
                       probe_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("gen")) return cmd_gen(gen, out);
    if (app.got_subcommand("analyze")) return cmd_analyze(analyze_instance, analyze_delta, analyze_json, out);
    if (app.got_subcommand("run")) return cmd_run(run_flags, out);
    if (app.got_subcommand("compare")) return cmd_compare(compare_flags, out);
    if (app.got_subcommand("probe")) return cmd_probe(probe_flags, out);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitAborted;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace bai::cli
