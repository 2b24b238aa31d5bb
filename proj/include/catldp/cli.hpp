#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "catldp/model.hpp"
#include "catldp/path.hpp"

namespace catldp::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success (including "bound check reported false" because the
// tool did its job), 2 config/validation error, 3 experiment ran but was
// statistically inconclusive, 1 anything unexpected.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInconclusive = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<std::string> input_dir;  // plotdata convenience flag
};

// Reads a JSON config. A manifest.json (recognized by "config" +
// "tool_version" keys) is unwrapped to its embedded config, so re-feeding a
// manifest reproduces the run.
nlohmann::json load_config_file(const std::string& path);

// Seed precedence: --seed flag, then config "seed", then CATLDP_SEED, then 0.
std::uint64_t resolve_seed(const nlohmann::json& config, const CliOverrides& ov);

ModelParams parse_model(const nlohmann::json& model_section);

// Target function from a kind section: exactly one of "f_slope" (single-cell
// line), "f_values" (grid values, leading 0), "f_csv" (one value per line).
TargetPath parse_target(const nlohmann::json& section);

// Executes one subcommand end to end: parse + validate config, run, write
// outputs and manifest.json under the out directory. Returns an exit code;
// configuration problems raise ConfigError for the caller to map to exit 2.
int run(const std::string& kind, const std::string& config_path, const CliOverrides& ov);

}  // namespace catldp::cli
