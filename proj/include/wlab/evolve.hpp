#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlab/model.hpp"

namespace wlab {

enum class StageSolver { fixed_point, simplified_newton };

std::string stage_solver_name(StageSolver s);

// Family default: fixed point everywhere except kdv, whose unbounded k³
// symbol breaks the fixed-point contraction at spectral resolutions.
StageSolver default_stage_solver(const ModelSpec& model);

struct EvolveOpts {
  double t_final = 1.0;  // absolute end time
  long nt = 100;         // uniform steps
  std::optional<StageSolver> stage_solver;  // empty = family default
  double stage_tol = 1e-12;
  int stage_max_iter = 100;
  double krasny_threshold = 0.0;  // 0 = off
  long record_every = 1;
  long snapshot_every = 0;  // 0 = auto (~16 snapshots)
  double floor_stop = 1e-2;  // resolution-loss threshold on the tail indicator

  void validate() const;
};

enum class StopCause { completed, stage_divergence, nan_detected, resolution_loss };

std::string stop_cause_name(StopCause c);

struct DiagnosticsRow {
  double t;
  double linf;
  double l2;
  double dx_l2;
  double mass;
  double momentum;
  double energy;
  double energy_drift;  // |1 - E/E0|
  double floor;         // max |û| over top 10% wavenumbers / max |û|
};

// |coeff| over the nonnegative-k half spectrum, one array per component
// (u first, then eta for the system).
struct SpectrumRecord {
  double t;
  std::vector<std::vector<double>> abs_coeffs;
};

struct Trajectory {
  ModelSpec model;
  std::vector<std::pair<double, State>> snapshots;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<SpectrumRecord> spectra;
  StopCause stop_cause = StopCause::completed;
  double stop_time = 0.0;
  long steps_taken = 0;
  std::string stop_detail;

  const State& final_state() const { return snapshots.back().second; }
};

// Thrown by step() when the stage iteration fails to contract.
class StageDivergence : public std::runtime_error {
 public:
  StageDivergence(const std::string& what, double time, int iters)
      : std::runtime_error(what), time(time), iterations(iters) {}
  double time;
  int iterations;
};

// One 2-stage Gauss-Legendre step (order 4).
State step(const ModelSpec& model, const State& state, double dt,
           const EvolveOpts& opts);

Trajectory evolve(const ModelSpec& model, const State& initial,
                  const EvolveOpts& opts);

}  // namespace wlab
