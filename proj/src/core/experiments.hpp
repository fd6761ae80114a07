#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dicke {

inline constexpr const char* kVersion = "0.1.0";

/// Parameter sweep for one reproduction table. `experiment` selects the
/// pipeline; the remaining fields are the sweep axes.
struct ExperimentConfig {
  std::string experiment;  // fig1a|fig1b|fig2|fig3|fig4|fig5|fig6|fig7|fig8
  int excitations = 2;
  double alpha = 0.2;
  std::vector<double> phi;
  std::vector<std::uint64_t> shots;  // "N" in configs
  std::vector<std::uint64_t> seeds;
  double grid_step = 0.01;
  double phi_grid_step = 0.017453292519943295;
  int n_bins = 50;
  std::string out;  // output path prefix
};

/// Parses and validates a config JSON object; throws ConfigInvalid with a
/// field-level message.
ExperimentConfig parse_experiment_config(const std::string& json_text);

/// Runs the sweep, writes <out>.csv (header row plus a manifest-hash
/// comment line) and <out>.manifest.json, and returns the manifest text.
/// Partial outputs are removed when a run fails.
std::string run_experiment(const ExperimentConfig& config);

}  // namespace dicke
