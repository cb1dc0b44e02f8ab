#ifndef WKFILTER_RUN_CONFIG_HPP
#define WKFILTER_RUN_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "wkfilter/errors.hpp"
#include "wkfilter/minimax.hpp"
#include "wkfilter/oracle.hpp"

namespace wkf::cli {

using json = nlohmann::json;

struct Tolerances {
  double solve = 1e-9;
  double minimality = 1e-6;
  double factorization = 1e-8;
  double fixed_point = 1e-8;
};

struct SimulationSpec {
  int n = 64;
  int paths = 100000;
  std::uint64_t seed = 20240901;
};

struct MinimaxClassSpec {
  std::string variant;  // "power" | "joint" | "band"
  double P0 = 1.0, P1 = 1.0, P2 = 1.0, eps = 0.0;
  std::optional<SpectralDensity> v, u, g1;
};

/// One fully validated run description.  Mirrors the config file
/// key-by-key; see the README for the schema.
struct RunConfig {
  SpectralDensity signal = SpectralDensity::moving_average({Complex(1.0, 0.0)});
  SpectralDensity noise = SpectralDensity::moving_average({Complex(1.0, 0.0)});
  FunctionalSpec functional;
  int truncation = 64;
  int grid = 4096;
  Tolerances tolerances;
  std::optional<MinimaxClassSpec> minimax;
  SimulationSpec simulation;
  std::string config_hash;  // FNV-1a of the canonical serialization
};

RunConfig parse_config(const json& doc);

/// Load a config file; a relative path that does not exist in the
/// working directory is retried under $WKFILTER_CONFIG_DIR.
RunConfig load_config(const std::string& path);

struct CommandOptions {
  int point = 0;                      // `point --p`
  std::string minimax_class;          // `minimax --class`
  std::string oracle_mode;            // `oracle {toeplitz|gridmax}`
  int window = 512;                   // `oracle toeplitz --M`
  int nodes = 32, restarts = 10;      // `oracle gridmax`
  std::optional<std::string> csv_prefix;
};

struct CommandResult {
  json document;
  int exit_code = 0;
};

/// Execute one subcommand against a config.  Throws wkf::Error on
/// validation/solver failures; the caller maps those to exit codes and
/// the machine-readable error record.
CommandResult run_command(const std::string& command, const RunConfig& config,
                          const CommandOptions& options);

/// Single-line machine-parsable error record for stderr.
json error_record(const Error& error);

std::string fnv1a_hex(const std::string& data);

}  // namespace wkf::cli

#endif  // WKFILTER_RUN_CONFIG_HPP
