#pragma once

// Experiment orchestration for the fbmlab tool: configuration parsing
// (key=value files plus command-line flags, flags winning), running one
// experiment, and writing its CSV and manifest atomically.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbmlab/boundaries.hpp"
#include "fbmlab/current.hpp"
#include "fbmlab/functionals.hpp"
#include "fbmlab/persistence.hpp"

namespace fbmlab {

enum class Experiment { Sample, Persist, Current, Functionals, Laplace, Oracle };

std::string to_string(Experiment experiment);

struct ExperimentConfig {
  Experiment experiment = Experiment::Persist;
  double hurst = 0.5;
  std::size_t grid_log2 = 10;
  double horizon = 1.0;
  std::optional<BoundarySpec> boundary;
  MonitoringMode mode = MonitoringMode::Grid;
  std::vector<double> k;
  std::vector<double> horizons;
  std::vector<double> epsilons;
  std::vector<double> lambdas;
  std::uint64_t n_paths = 1000;
  std::uint64_t seed = 0;
  std::string output = "fbmlab.csv";
  bool with_log_correction = false;
  CurrentVariant variant = CurrentVariant::ContinuousJT;
  LaplaceScaling scaling = LaplaceScaling::FixedGrid;

  SimulationGrid grid() const { return SimulationGrid(std::size_t{1} << grid_log2, horizon); }
};

// Raw key -> value settings, keyed by the long flag name without dashes
// ("hurst", "grid-log2", ...).
using Settings = std::map<std::string, std::string>;

// key=value lines; blank lines and '#' comments are skipped. Keys that a
// manifest adds on top of the configuration echo (version, timings, targets,
// fits, warnings) are accepted and ignored, so a manifest is itself a valid
// config file. Anything else unknown is a ConfigError naming the key.
Settings parse_settings_text(std::string_view text);

// Validates every field and cross-field constraint; ConfigError(key, reason)
// on the first failure.
ExperimentConfig config_from_settings(const Settings& settings);

// argv-style arguments without the program name: an optional leading
// subcommand, then flags. --config <file> is read first and the remaining
// flags override its keys.
ExperimentConfig parse_config(const std::vector<std::string>& args);

// Configuration echo, one key=value per line, that parses back to `config`.
std::string config_echo(const ExperimentConfig& config);

struct RunResult {
  std::string csv_path;
  std::string manifest_path;
};

// Runs the experiment, writes <output> and <output>.manifest (each through a
// temporary file and a rename). Oracle tables are also printed to `log`.
RunResult run(const ExperimentConfig& config, std::ostream& log);

// Entry point used by the executable: exit 0 on success, 2 on configuration
// errors, 1 on any other failure, with a diagnostic on `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fbmlab
