#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wlab/evolve.hpp"
#include "wlab/traveling.hpp"

namespace wlab {

enum class Command {
  solve_tw,
  sweep_branch,
  evolve_run,
  sweep_critical_times,
  compare_kdv,
  fit_spectrum_cmd,
  stability_map_cmd,
};

std::string command_name(Command c);
std::optional<Command> command_from_name(const std::string& name);

// Initial-data expression tree (`gaussian(10,1)`, `sum(soliton(1.2),
// gaussian(3,1))`, ...).  Solitons are resolved against the run's model and
// grid when the data is built.
struct InitialExpr {
  enum class Kind { zero, gaussian, sine_gaussian, soliton, sum, scale, shift };
  Kind kind = Kind::zero;
  double p0 = 0.0, p1 = 0.0;
  std::vector<std::shared_ptr<InitialExpr>> args;
  std::string text;  // original source, for the manifest
};

std::shared_ptr<InitialExpr> parse_initial_expr(const std::string& text);

struct RunConfig {
  Command command = Command::evolve_run;
  bool command_declared = false;
  ModelSpec model;
  int grid_n = 1 << 12;
  double grid_l = 5.0;
  std::shared_ptr<InitialExpr> initial_u;
  std::shared_ptr<InitialExpr> initial_eta;
  EvolveOpts evolve;
  NewtonOpts newton;
  std::vector<double> c_values;    // sweep-branch
  std::vector<double> eps_values;  // sweep-critical-times / compare-kdv
  std::optional<std::pair<double, double>> fit_window;
  std::optional<double> delta_tol;
  std::string fit_input;           // fit-spectrum: snapshot or spectrum CSV
  int compare_j = 0;
  double horizon_multiple = 1.0;
  double stability_kmax = 0.0;     // 0 = grid kmax
  int stability_count = 512;
  std::string output_dir = "out";
};

// Parses the documented `key = value` / `[section]` format.  Unknown keys,
// syntax errors and range violations throw ConfigError with the line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Applies `section.key=value` overrides (CLI --set).
void apply_override(RunConfig& cfg, const std::string& assignment);

// The initial state for an evolve-style run (resolves solitons; cache keyed
// by speed is shared within the run).
State build_initial_state(const RunConfig& cfg, const GridPtr& grid);

}  // namespace wlab
