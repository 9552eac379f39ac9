#include <cstdio>
#include <fstream>
#include <sstream>

#include "bai/errors.hpp"
#include "bai/harness.hpp"

namespace bai {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Instance names may carry commas ("clustered(4@0.5,1@0.25)").
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void csv_footer(std::ostringstream& out, const RunMetadata& meta) {
  out << "# tool_version=" << kToolVersion << " seed=" << meta.seed
      << " config_hash=" << meta.config_hash;
  if (!meta.heuristic_algorithms.empty()) {
    out << " heuristic=";
    for (std::size_t i = 0; i < meta.heuristic_algorithms.size(); ++i) {
      out << (i ? ";" : "") << meta.heuristic_algorithms[i];
    }
  }
  out << "\n";
}

nlohmann::ordered_json json_footer(const RunMetadata& meta) {
  nlohmann::ordered_json m;
  m["tool_version"] = std::string(kToolVersion);
  m["seed"] = meta.seed;
  m["config_hash"] = meta.config_hash;
  m["heuristic_algorithms"] = meta.heuristic_algorithms;
  return m;
}

}  // namespace

RunMetadata metadata_for(const ExperimentConfig& config) {
  RunMetadata meta;
  meta.seed = config.seed;
  meta.config_hash = config.hash();
  for (Algorithm a : config.algorithms) {
    if (a == Algorithm::kExpGapEntropyAdaptive) meta.heuristic_algorithms.emplace_back(to_string(a));
  }
  return meta;
}

std::string results_csv(const std::vector<TrialSummary>& rows, const RunMetadata& meta) {
  std::ostringstream out;
  out << "instance,algorithm,delta,trials,errors,error_rate,ci95,aborts,mean_samples,"
         "std_samples,H_total,entropy_nats,mt_bound,kks_bound,conjectured_bound,bound_ratio\n";
  for (const auto& r : rows) {
    out << csv_field(r.instance) << ',' << r.algorithm << ',' << num(r.delta) << ',' << r.trials
        << ',' << r.errors << ',' << num(r.error_rate) << ',' << num(r.ci95) << ',' << r.aborts
        << ',' << num(r.mean_samples) << ',' << num(r.std_samples) << ',' << num(r.total_weight)
        << ',' << num(r.entropy_nats) << ',' << num(r.mt_bound) << ',' << num(r.kks_bound) << ','
        << num(r.conjectured_bound) << ',' << num(r.bound_ratio) << '\n';
  }
  csv_footer(out, meta);
  return out.str();
}

nlohmann::ordered_json results_json(const std::vector<TrialSummary>& rows,
                                    const RunMetadata& meta, const ComparisonTable* ranking) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["instance"] = r.instance;
    j["algorithm"] = r.algorithm;
    j["delta"] = r.delta;
    j["trials"] = r.trials;
    j["errors"] = r.errors;
    j["error_rate"] = r.error_rate;
    j["ci95"] = r.ci95;
    j["aborts"] = r.aborts;
    j["mean_samples"] = r.mean_samples;
    j["std_samples"] = r.std_samples;
    j["H_total"] = r.total_weight;
    j["entropy_nats"] = r.entropy_nats;
    j["mt_bound"] = r.mt_bound;
    j["kks_bound"] = r.kks_bound;
    j["conjectured_bound"] = r.conjectured_bound;
    j["bound_ratio"] = r.bound_ratio;
    doc["rows"].push_back(std::move(j));
  }
  if (ranking != nullptr) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& [delta, names] : ranking->ranking) {
      nlohmann::ordered_json entry;
      entry["delta"] = delta;
      entry["by_mean_samples"] = names;
      list.push_back(std::move(entry));
    }
    doc["ranking"] = std::move(list);
  }
  doc["metadata"] = json_footer(meta);
  return doc;
}

std::string probe_csv(const ProbeTable& table, const RunMetadata& meta) {
  std::ostringstream out;
  out << "m,entropy_nats,H_total,mean_samples,bound_ratio\n";
  for (const auto& row : table.rows) {
    out << row.m << ',' << num(row.entropy_nats) << ',' << num(row.total_weight) << ','
        << num(row.mean_samples) << ',' << num(row.bound_ratio) << '\n';
  }
  out << "# ratio_spread=" << num(table.ratio_spread) << "\n";
  csv_footer(out, meta);
  return out.str();
}

nlohmann::ordered_json probe_json(const ProbeTable& table, const RunMetadata& meta) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    j["m"] = row.m;
    j["entropy_nats"] = row.entropy_nats;
    j["H_total"] = row.total_weight;
    j["mean_samples"] = row.mean_samples;
    j["bound_ratio"] = row.bound_ratio;
    j["errors"] = row.summary.errors;
    j["aborts"] = row.summary.aborts;
    doc["rows"].push_back(std::move(j));
  }
  doc["ratio_spread"] = table.ratio_spread;
  doc["metadata"] = json_footer(meta);
  return doc;
}

std::vector<std::filesystem::path> write_text_outputs(const std::filesystem::path& out,
                                                      OutputFormat format, const std::string& csv,
                                                      const nlohmann::ordered_json& json) {
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& ext, const std::string& body) {
    std::filesystem::path path = out;
    path += ext;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << body;
    written.push_back(path);
  };
  if (format != OutputFormat::kJson) write(".csv", csv);
  if (format != OutputFormat::kCsv) write(".json", json.dump(2) + "\n");
  return written;
}

}  // namespace bai
