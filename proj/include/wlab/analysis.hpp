#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wlab/evolve.hpp"

namespace wlab {

// Three-parameter Fourier-tail fit |û(k)| ≈ A k^{-(μ+1)} e^{-δk} on k ≫ 1;
// δ is the distance of the nearest complex singularity to the real axis.
struct SingularityFit {
  double delta = 0.0;
  double mu = 0.0;
  double amplitude = 0.0;
  double k_min = 0.0, k_max = 0.0;  // window actually used
  double rms_residual = 0.0;        // in log space
  int n_modes = 0;
};

// Linear least squares of log|û| against {1, log k, k} on positive
// wavenumbers.  Default window: [0.1·kmax, k*] with k* the largest k whose
// modulus exceeds 10× the noise floor max(krasny_floor, 1e-13).
// Throws ConfigError when fewer than 16 usable modes remain.
SingularityFit fit_spectrum(const SpectralField& field,
                            std::optional<std::pair<double, double>> window =
                                std::nullopt,
                            double krasny_floor = 0.0);

// Core fit on a sampled half spectrum (k[i] >= 0, abs[i] = |û(k_i)|).
SingularityFit fit_spectrum_samples(const std::vector<double>& k,
                                    const std::vector<double>& abs_coeff,
                                    std::optional<std::pair<double, double>>
                                        window,
                                    double krasny_floor);

enum class Breakdown { none, cusp, linf_blowup, resolution_loss };

std::string breakdown_name(Breakdown b);

struct BreakdownReport {
  Breakdown classification = Breakdown::none;
  double critical_time = 0.0;
  double mu_at_critical = 0.0;
  double delta_tol = 0.0;
  std::vector<std::pair<double, SingularityFit>> fits;  // (t, fit) series
};

// Fits every recorded spectrum of the trajectory; the critical time is the
// first record with δ < delta_tol (default: one grid spacing).  μ at that
// record classifies cusp (μ>0) vs L∞ blow-up (μ<0); resolution-loss when the
// evolution stopped early without a δ-crossing.
BreakdownReport detect_breakdown(const Trajectory& traj, double delta_tol = 0.0,
                                 double krasny_floor = 0.0);

struct ComparisonPoint {
  double t;        // physical time
  double hj_diff;  // ||u_kdv - u_whitham||_{H^j}
  double bound;    // ε² t reference slope
};

struct ComparisonResult {
  std::vector<ComparisonPoint> series;
  double m_j = 0.0;  // max over t >= 10 dt of hj_diff / (ε² t)
  bool complete = true;
  std::string flag;  // set when either run broke down early
};

// Evolves Whitham and KdV from φ on the same grid (τ-scaled, simplified
// Newton stages) up to t = horizon_multiple/ε and reports the H^j gap.
ComparisonResult compare_whitham_kdv(const SpectralField& phi, double eps,
                                     int j, double horizon_multiple,
                                     long nt = 2000, long record_every = 10);

// max over the samples of |l(√εk)k - (k - εk³/6)| / (ε²|k|⁵); all samples
// must satisfy 0 < √ε|k| ≤ 1.  Evaluated in extended precision (the
// numerator cancels to O(x⁴)).
double symbol_expansion_check(double eps, const std::vector<double>& k_samples);

struct StabilityMap {
  std::vector<double> k;             // sampled modes
  std::vector<double> phase_speed_sq;  // multiplier(k) - cε per mode
  std::vector<char> unstable;        // discriminant < 0
  double x_threshold = 0.0;          // x_{c,ε}: tanh x / x = cε (0 if cε >= 1)
  bool all_unstable = false;
  std::optional<std::pair<double, double>> unstable_band;  // β > 0: finite
};

// Linearization of the Boussinesq-Whitham system around (η,u) = (-c, 0):
// mode k is unstable iff (1+βεk²)·tanh(√εk)/(√εk) < cε.
StabilityMap stability_map(double c, double eps, double beta,
                           const std::vector<double>& k_grid);

// Bisection root of tanh x / x = target on x > 0 (monotone decreasing from
// 1); target must lie in (0,1).
double tanhc_inverse(double target, double tol = 1e-12);

}  // namespace wlab
