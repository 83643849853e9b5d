#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/potential.hpp"
#include "phasespace/states.hpp"

namespace phasespace {

/// Malformed or unknown configuration content.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  std::size_t n = 256;
  double x_min = -16.0;
  double x_max = 16.0;
  double hbar = 1.0;
  double mass = 1.0;
  bool square = false;  ///< centered dx == dp grid; x_min/x_max ignored
};

struct StateTerm;

struct StateSpec {
  std::string type;  ///< gaussian, harmonic, cat, two_slit, superposition
  std::map<std::string, double> params;
  std::vector<StateTerm> terms;
};

struct StateTerm {
  StateSpec state;
  cplx coefficient;
};

struct PotentialSpec {
  std::string type = "free";  ///< harmonic, quartic, double_well, polynomial, free
  std::map<std::string, double> params;
  std::vector<double> coefficients;
};

struct ExperimentSpec {
  std::string type;  ///< wigner, evolve, validate, tomo, moments, ehrenfest
  std::string route = "schrodinger";
  double dt = 1e-3;
  double t_final = 0.0;
  std::vector<double> sample_times;
  unsigned n_max = 1;
  std::vector<double> angles;
};

struct OutputSpec {
  std::string directory;
  std::vector<std::string> formats = {"json", "csv", "wig1"};
};

struct ScenarioConfig {
  std::string name = "custom";
  GridSpec grid;
  StateSpec state;
  PotentialSpec potential;
  ExperimentSpec experiment;
  OutputSpec output;
};

/// Parses a JSON config document. Unknown keys and bad types raise
/// ConfigError; physical parameters are checked by building the grid,
/// state and potential, which raises PreconditionError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form of a config, echoed into manifests.
std::string config_to_json(const ScenarioConfig& config);

PhaseGrid build_grid(const GridSpec& spec);
Wavefunction build_state(const PhaseGrid& grid, const StateSpec& spec);
Potential build_potential(const PotentialSpec& spec);

struct ScenarioInfo {
  std::string name;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();
/// Config of a built-in scenario; nullopt for an unknown name.
std::optional<ScenarioConfig> builtin_scenario(std::string_view name);

struct RunResult {
  std::filesystem::path directory;
  std::vector<std::string> artifacts;  ///< file names inside directory, manifest.json last
  std::string manifest;               ///< manifest.json contents
  double runtime_seconds = 0.0;
};

/// Output root: the PHASESPACE_OUTPUT_ROOT environment variable if set,
/// else the current directory.
std::filesystem::path default_output_root();

/// Runs the experiment and writes its artifacts under
/// output_root / config.output.directory (or runs/<name> when empty).
/// manifest.json holds inputs, version and metrics and is byte-stable;
/// wall-clock time goes to runtime.json next to it.
RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& output_root);

std::string_view toolkit_version() noexcept;

}  // namespace phasespace
