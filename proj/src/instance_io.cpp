#include "bai/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "bai/errors.hpp"

namespace bai {

using nlohmann::json;

json instance_to_json(const BanditInstance& instance) {
  json doc;
  if (instance.name()) doc["name"] = *instance.name();
  doc["means"] = std::vector<double>(instance.means().begin(), instance.means().end());
  doc["variance"] = instance.variance();
  return doc;
}

BanditInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw InstanceLoadError("instance must be a JSON object");
  if (!doc.contains("means") || !doc["means"].is_array()) {
    throw InstanceLoadError("instance needs a \"means\" array");
  }
  std::vector<double> means;
  for (const auto& m : doc["means"]) {
    if (!m.is_number()) throw InstanceLoadError("\"means\" entries must be numbers");
    means.push_back(m.get<double>());
  }
  double variance = BanditInstance::kVariance;
  if (doc.contains("variance")) {
    if (!doc["variance"].is_number()) throw InstanceLoadError("\"variance\" must be a number");
    variance = doc["variance"].get<double>();
  }
  std::optional<std::string> name;
  if (doc.contains("name") && !doc["name"].is_null()) {
    if (!doc["name"].is_string()) throw InstanceLoadError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  return BanditInstance(std::move(means), std::move(name), variance);
}

BanditInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceLoadError("cannot open instance file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InstanceLoadError("malformed instance file " + path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const std::filesystem::path& path, const BanditInstance& instance) {
  std::ofstream out(path);
  if (!out) throw InstanceLoadError("cannot write instance file " + path.string());
  out << instance_to_json(instance).dump(2) << "\n";
}

namespace {

template <typename T>
T field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InstanceLoadError(std::string("generator field \"") + key + "\": " + e.what());
  }
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    parts.emplace_back(text.substr(start, end == std::string_view::npos ? text.npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

json parse_scalar_or_list(const std::string& value) {
  auto number = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InstanceLoadError("expected a number in generator spec, got '" + s + "'");
    }
  };
  if (value.find('/') == std::string::npos) return number(value);
  json list = json::array();
  for (const auto& part : split(value, '/')) list.push_back(number(part));
  return list;
}

}  // namespace

InstanceSpec spec_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("family") || !doc["family"].is_string()) {
    throw InstanceLoadError("generator spec needs a \"family\" string");
  }
  InstanceSpec spec;
  try {
    spec.family = parse_family(doc["family"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw InstanceLoadError(e.what());
  }
  spec.gap = field(doc, "gap", spec.gap);
  spec.sizes = field(doc, "sizes", spec.sizes);
  spec.gaps = field(doc, "gaps", spec.gaps);
  spec.base_mean = field(doc, "base_mean", spec.base_mean);
  spec.groups = field(doc, "m", spec.groups);
  spec.n = field(doc, "n", spec.n);
  spec.gap_min = field(doc, "gap_min", spec.gap_min);
  spec.gap_max = field(doc, "gap_max", spec.gap_max);
  spec.seed = field(doc, "seed", spec.seed);
  spec.means = field(doc, "means", spec.means);
  if (doc.contains("permutation_seed")) {
    spec.permutation_seed = field<std::uint64_t>(doc, "permutation_seed", 0);
  }
  if (doc.contains("name")) spec.name = field<std::string>(doc, "name", "");
  return spec;
}

json spec_to_json(const InstanceSpec& spec) {
  json doc;
  doc["family"] = std::string(to_string(spec.family));
  switch (spec.family) {
    case Family::kTwoArm:
      doc["gap"] = spec.gap;
      break;
    case Family::kClustered:
      doc["sizes"] = spec.sizes;
      doc["gaps"] = spec.gaps;
      doc["base_mean"] = spec.base_mean;
      break;
    case Family::kMaxEntropy:
      doc["m"] = spec.groups;
      break;
    case Family::kRandom:
      doc["n"] = spec.n;
      doc["gap_min"] = spec.gap_min;
      doc["gap_max"] = spec.gap_max;
      doc["seed"] = spec.seed;
      break;
    case Family::kExplicit:
      doc["means"] = spec.means;
      break;
  }
  if (spec.permutation_seed) doc["permutation_seed"] = *spec.permutation_seed;
  if (spec.name) doc["name"] = *spec.name;
  return doc;
}

InstanceSpec parse_spec_string(std::string_view text) {
  const std::size_t colon = text.find(':');
  json doc;
  doc["family"] = std::string(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    for (const auto& pair : split(text.substr(colon + 1), ',')) {
      const std::size_t eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InstanceLoadError("generator spec entries look like key=value, got '" + pair + "'");
      }
      const std::string key = pair.substr(0, eq);
      const std::string value = pair.substr(eq + 1);
      if (key == "name") {
        doc[key] = value;
        continue;
      }
      json parsed = parse_scalar_or_list(value);
      const bool integral = key == "m" || key == "n" || key == "seed" ||
                            key == "permutation_seed" || key == "sizes";
      if (integral) {
        auto to_int = [](const json& v) { return static_cast<std::uint64_t>(v.get<double>()); };
        if (parsed.is_array()) {
          json ints = json::array();
          for (const auto& v : parsed) ints.push_back(to_int(v));
          parsed = ints;
        } else {
          parsed = to_int(parsed);
        }
      }
      if ((key == "sizes" || key == "gaps" || key == "means") && !parsed.is_array()) {
        parsed = json::array({parsed});
      }
      doc[key] = parsed;
    }
  }
  return spec_from_json(doc);
}

}  // namespace bai
