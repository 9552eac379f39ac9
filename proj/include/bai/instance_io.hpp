#pragma once

#include <filesystem>
#include <string_view>

#include "bai/core_model.hpp"
#include "bai/generators.hpp"
#include "json.hpp"

namespace bai {

// Instance file schema: {"name": string?, "means": [number, ...], "variance": 1.0}.
// A missing "variance" is read as 1.0; any other value is rejected.
[[nodiscard]] nlohmann::json instance_to_json(const BanditInstance& instance);
[[nodiscard]] BanditInstance instance_from_json(const nlohmann::json& doc);

// Both throw InstanceLoadError for unreadable or malformed files, and the
// specific validation error (NonUniqueMaximum, InvalidVariance, ...) for
// well-formed files describing an invalid instance.
[[nodiscard]] BanditInstance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const BanditInstance& instance);

// Generator spec object, e.g. {"family": "clustered", "sizes": [4, 1],
// "gaps": [0.5, 0.25]} or {"family": "max-entropy", "m": 3}.
[[nodiscard]] InstanceSpec spec_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json spec_to_json(const InstanceSpec& spec);

// Compact command-line form "family:key=value,key=value", e.g.
// "two-arm:gap=0.5", "max-entropy:m=4", "clustered:sizes=4/1,gaps=0.5/0.25".
[[nodiscard]] InstanceSpec parse_spec_string(std::string_view text);

}  // namespace bai
