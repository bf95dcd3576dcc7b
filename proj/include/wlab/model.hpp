#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/spectral.hpp"

namespace wlab {

enum class ModelFamily { whitham, kdv, boussinesq };
enum class TimeScale { t, tau };

std::string family_name(ModelFamily f);
std::string time_scale_name(TimeScale s);

// Which PDE, with its parameters and frame.
//
//   whitham:     u_t + L u_x + ε u u_x = 0,   L = l(√εD) (β=0) or the
//                capillary multiplier (β>0)
//   kdv:         u_t + u_x + (ε/2)(1/3-β) u_xxx + ε u u_x = 0
//   boussinesq:  η_t + M u_x + ε(ηu)_x = 0,  u_t + η_x + (ε/2)(u²)_x = 0,
//                M = T²_ε (β=0) or P_ε (β>0)
//
// c is the physical commoving-frame speed.  time-scale tau means τ = εt with
// the unit frame speed absorbed (scalar families only); c keeps its physical
// meaning there, so the frame term becomes (m(k)-c)/ε.
struct ModelSpec {
  ModelFamily family = ModelFamily::whitham;
  double eps = 1.0;
  double beta = 0.0;
  double c = 0.0;
  TimeScale scale = TimeScale::t;

  void validate() const;  // throws ConfigError
  bool is_system() const { return family == ModelFamily::boussinesq; }
  bool has_surface_tension() const { return beta > 0.0; }

  // The dispersion multiplier m(k) of the family (scalar: acts on u_x;
  // boussinesq: acts on u_x in the mass equation).
  SymbolSpec dispersion_symbol() const;

  // Scalar families: w(k) with linear evolution coeff' = -i w(k) coeff in
  // the model's own time variable and frame.  Nyquist entry is zeroed.
  std::vector<double> linear_phase(const Grid& grid) const;

  // Coefficient of u u_x (scalar) / of the quadratic terms (system) in the
  // model's own time variable: ε for t-scale, 1 for tau.
  double nonlinear_coeff() const;
};

struct State {
  SpectralField u;
  std::optional<SpectralField> eta;  // present iff family == boussinesq
  double time = 0.0;

  static State scalar(SpectralField u0, double t0 = 0.0);
  static State system(SpectralField eta0, SpectralField u0, double t0 = 0.0);
};

void check_state(const ModelSpec& model, const State& state);

// Time derivative of the Fourier coefficients (deta empty for scalar models).
struct StateDeriv {
  std::vector<cplx> du;
  std::vector<cplx> deta;
};

StateDeriv rhs(const ModelSpec& model, const State& state);

// Exact solution of the linear equation (nonlinearity dropped) at time t:
// coeff(k) -> e^{-i t w(k)} coeff(k).  Scalar families, lab frame only.
SpectralField linear_group(const ModelSpec& model, const SpectralField& phi,
                           double t);

struct Conserved {
  double mass = 0.0;      // ∫u (scalar) / ∫η (system)
  double mass_u = 0.0;    // ∫u (system; equals mass for scalar)
  double momentum = 0.0;  // ∫u² (scalar) / ∫ηu (system)
  double energy = 0.0;
};

Conserved conserved(const ModelSpec& model, const State& state);

}  // namespace wlab
