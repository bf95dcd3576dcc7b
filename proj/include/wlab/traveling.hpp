#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/model.hpp"

namespace wlab {

struct NewtonOpts {
  double newton_tol = 1e-12;   // on the l2 residual of F(Û) = 0
  int max_newton = 50;
  double gmres_tol = 1e-3;     // relative (inexact Newton)
  int gmres_restart = 30;
  int max_line_search = 8;     // residual-halving damping
};

struct TravelingWave {
  ModelSpec model;
  double c = 0.0;
  SpectralField u;
  std::optional<SpectralField> eta;  // N = cU - (ε/2)U², boussinesq only
  double residual = 0.0;
  double mass = 0.0;    // ∫U² dx (the paper's L² mass)
  double energy = 0.0;  // model energy of the wave in its commoving frame

  State as_state() const;
};

// Closed-form KdV soliton iterates, sampled on the grid and centered at 0.
//   whitham:     U = 3δ sech²(√(3δ/2) x),                 c = 1 + δε
//   whitham-st:  U = 3δ sech²(√(3δ/(2(1-3β))) x),         c = 1 + δε
//   boussinesq:  U = 2α sech²(√(3α/2) x), N from cU-(ε/2)U², c = 1 + αε
// speed_offset is δ (α).  Throws ConfigError when the width argument is not
// positive (depression waves need δ < 0 once β > 1/3).
TravelingWave kdv_soliton(ModelFamily family, double eps, double beta,
                          double speed_offset, GridPtr grid);

struct SolveReport {
  bool converged = false;
  double residual = 0.0;
  std::vector<double> residual_history;
  int newton_iters = 0;
  std::string message;
  std::optional<TravelingWave> wave;     // set when converged
  std::optional<SpectralField> last_iterate;
};

// Newton-Krylov solve of the traveling-wave equation at speed c, matrix-free
// GMRES on the even (cosine) coefficients.  `initial` must be real and even.
SolveReport solve_traveling_wave(const ModelSpec& model, double c,
                                 const SpectralField& initial,
                                 const NewtonOpts& opts = {});

struct BranchPoint {
  double c;
  double max_u;
  double mass;
  double energy;
  double residual;
  int n_modes;
};

struct Branch {
  std::vector<TravelingWave> waves;
  std::vector<BranchPoint> table;
  bool complete = false;     // all requested speeds converged
  double edge_c = 0.0;       // last converged speed
  std::string edge_message;  // failure description when truncated
};

// Continuation in speed: the first point seeds from the KdV soliton, each
// converged wave seeds the next.  Throws ConfigError if the first point
// fails; later failures truncate the branch and report the edge.
Branch continuation_sweep(const ModelSpec& model,
                          const std::vector<double>& c_values, GridPtr grid,
                          const NewtonOpts& opts = {});

// Convenience used by initial-data expressions: continuation from a small
// speed offset up to c (direct solve first, bisected continuation on
// failure).  Throws ConfigError when the wave cannot be constructed.
TravelingWave resolve_soliton(const ModelSpec& model, double c, GridPtr grid,
                              const NewtonOpts& opts = {});

}  // namespace wlab
