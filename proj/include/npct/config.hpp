#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "npct/pipeline.hpp"

namespace npct {

/// Full JSON view of a config, phantom expanded inline. Feeding this back
/// through config_from_json reproduces the config exactly.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Builds a config from JSON. Keys missing from `j` take their defaults;
/// unknown keys are a ConfigError. A string "phantom" is either "default" or
/// a path resolved against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});

/// Applies one "dotted.key=value" override to a JSON config. The value is
/// parsed as JSON, falling back to a plain string. The key must exist in the
/// default schema.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Reads a config file (or defaults when `path` is empty) and applies
/// overrides in order.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

PhantomSpec load_phantom_spec(const std::filesystem::path& path, double energy_keV);
PhantomSpec phantom_from_json(const nlohmann::json& j, double energy_keV,
                              const std::filesystem::path& base_dir = {});
nlohmann::json phantom_to_json(const PhantomSpec& spec);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace npct
