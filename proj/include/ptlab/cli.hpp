#pragma once
// Config-driven experiments: flat key-value schemas per subcommand, single
// runs and gridded sweeps that write artifacts plus a checksummed manifest.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptlab/io.hpp"

namespace ptlab::cli {

enum class ValueType { Int, Double, String, Bool };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string default_value;
  std::string help;
  std::vector<std::string> choices;  // empty: any value of the type
};

struct Schema {
  std::string subcommand;
  std::string summary;
  std::vector<KeySpec> keys;
  const KeySpec* find(const std::string& key) const;
};

std::vector<std::string> subcommands();
/// Throws ConfigError for unknown subcommands.
const Schema& schema(const std::string& subcommand);

/// Keys every subcommand accepts besides its own.
inline constexpr const char* kCommonKeys[] = {"subcommand", "seed", "output_dir", "workers"};
inline constexpr int kMaxSweepKeys = 3;

struct ExperimentConfig {
  std::string subcommand;
  std::map<std::string, std::string> params;               // every schema key, defaults filled
  std::map<std::string, std::vector<std::string>> sweep;   // gridded keys, in key order
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "ptlab-out";
  int workers = 1;

  bool is_sweep() const { return !sweep.empty(); }
};

/// Values from a config file and command-line overrides, in that order of
/// precedence (later wins). Keys prefixed "sweep." carry grids: a comma list
/// or linspace(a, b, n). Validates every key, type and choice; ConfigError
/// messages name the file line or "command line".
ExperimentConfig resolve(const std::string& subcommand, const std::map<std::string, io::KvEntry>& file,
                         const std::vector<std::pair<std::string, std::string>>& overrides);

/// Expands "a, b, c" or "linspace(a, b, n)".
std::vector<std::string> expand_grid(const std::string& grid, const std::string& where);

struct Artifact {
  std::string file;  // relative to the output directory
  std::string content;
};

struct CellOutput {
  std::vector<Artifact> artifacts;
  nlohmann::json summary;
};

/// One engine run with fully resolved parameters; `prefix` is prepended to
/// artifact names. Engine errors propagate as ptlab::Error.
CellOutput run_cell(const std::string& subcommand, const std::map<std::string, std::string>& params,
                    std::uint64_t seed, const std::string& prefix);

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config error, 3 engine error, 4 partial sweep failure
  nlohmann::json manifest;
  std::string message;
};

/// Runs the experiment (single or sweep), writes artifacts atomically and
/// manifest.json into output_dir. Never throws for engine errors.
RunResult run(const ExperimentConfig& cfg);

/// Exit code for an exception thrown while resolving or running.
int exit_code_for(const std::exception& e);

}  // namespace ptlab::cli
