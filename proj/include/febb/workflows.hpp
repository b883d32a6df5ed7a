#pragma once

// The four command-line workflows. Configuration is a flat key=value map;
// keys match the long command-line flags without the leading dashes.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "febb/beam.hpp"
#include "febb/identification.hpp"
#include "febb/io.hpp"

namespace febb {

enum class Mode { Solve, Sweep, Convergence, Identify };

using Settings = std::map<std::string, std::string>;

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
Settings read_config_file(const std::filesystem::path& path);

/// Keys of `overrides` replace those of `base`.
Settings merge_settings(Settings base, const Settings& overrides);

/// Length-scale presets for the unit benchmark beam: case-i, case-ii or both.
std::vector<double> sweep_preset(const std::string& name);

struct RunConfig {
  Mode mode = Mode::Solve;
  BeamSpec beam;
  std::vector<double> alpha;  // single value for solve/convergence, grid otherwise
  std::vector<double> ell;
  std::vector<Index> m;  // solve: one value; convergence: refinement levels
  double dx = 1e-3;      // sweep grid step
  SolverOptions solver;
  AdmissibilityRule rule;
  std::filesystem::path data;
  std::filesystem::path out;

  /// Applies mode defaults, then `settings`. Throws ConfigError on unknown
  /// keys or unparsable values.
  static RunConfig from_settings(Mode mode, const Settings& settings);
};

std::optional<Mode> parse_mode(const std::string& name);

struct SolveResult {
  DeflectionField field;
  Profiles profiles;
};

SolveResult run_solve(const RunConfig& config, std::ostream& csv);

std::vector<SweepRow> run_sweep(const RunConfig& config, std::ostream& csv);

/// Tip deflection for m, 2m, 4m, ... at fixed ell, with the Richardson order
/// log2((t0 - t1) / (t1 - t2)) for every consecutive triple.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::ostream& csv);

FitResult run_identify(const RunConfig& config, std::ostream& csv, std::ostream& summary);

}  // namespace febb
