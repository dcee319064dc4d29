#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "phasegeo/potential.hpp"

namespace phasegeo {

inline constexpr const char* kVersion = "0.1.0";

/// Commands understood by run(), in stable order.
const std::vector<std::string>& command_names();

struct Preset {
  std::string name;
  std::string description;
  std::string command;
  nlohmann::json config;
};

/// Built-in experiment presets in stable order.
const std::vector<Preset>& presets();
/// Throws ConfigError for unknown names.
const Preset& find_preset(const std::string& name);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string started;   // ISO 8601, UTC
  std::string finished;  // ISO 8601, UTC
  double seconds = 0.0;
  std::vector<std::string> files;  // relative to the output directory
  std::string status = "ok";       // ok | error
  int exit_code = 0;
  std::string error;
  nlohmann::json timings = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Runs one command on a parsed config, writes its artifacts and
/// manifest.json under `out_dir`, and never throws for module errors: they
/// are recorded in the manifest with a nonzero exit code.
RunManifest run(const std::string& command, const nlohmann::json& config,
                const std::filesystem::path& out_dir, std::uint64_t seed = 0, int threads = 1);

/// 0 success, 2 configuration, 3 numeric failure, 4 infeasible or geometry.
int exit_code_of(const std::exception& e);

std::uint64_t fnv1a(std::string_view bytes);
/// FNV-1a of the canonical dump of {command, config, seed}, as 16 hex digits.
std::string config_hash(const std::string& command, const nlohmann::json& config,
                        std::uint64_t seed);

/// Thread count from PHASEGEO_THREADS, else 1.
int default_threads();

/// Either {"builtin": name, "options": {...}} or a full potential descriptor.
PotentialPtr potential_from_config(const nlohmann::json& j);

/// %.17g formatting.
std::string format_double(double v);

}  // namespace phasegeo
