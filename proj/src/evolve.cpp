#include "wlab/evolve.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "wlab/errors.hpp"
#include "wlab/kernels.hpp"

namespace wlab {

std::string stage_solver_name(StageSolver s) {
  return s == StageSolver::fixed_point ? "fixed-point" : "simplified-newton";
}

StageSolver default_stage_solver(const ModelSpec& model) {
  return model.family == ModelFamily::kdv ? StageSolver::simplified_newton
                                          : StageSolver::fixed_point;
}

void EvolveOpts::validate() const {
  if (nt < 1) throw ConfigError("Nt must be >= 1");
  if (!(stage_tol > 0.0)) throw ConfigError("stage-tol must be positive");
  if (stage_max_iter < 1) throw ConfigError("stage-max-iter must be >= 1");
  if (krasny_threshold < 0.0)
    throw ConfigError("krasny-threshold must be nonnegative");
  if (record_every < 1) throw ConfigError("record-every must be >= 1");
}

std::string stop_cause_name(StopCause c) {
  switch (c) {
    case StopCause::completed: return "completed";
    case StopCause::stage_divergence: return "stage-divergence";
    case StopCause::nan_detected: return "nan";
    case StopCause::resolution_loss: return "resolution-loss";
  }
  return "?";
}

namespace {

// 2-stage Gauss-Legendre tableau.
constexpr double SQ3 = 1.7320508075688772935;
constexpr double A11 = 0.25, A12 = 0.25 - SQ3 / 6.0;
constexpr double A21 = 0.25 + SQ3 / 6.0, A22 = 0.25;

using Vec = std::vector<cplx>;

void solve4(std::array<std::array<cplx, 4>, 4>& a, cplx* inv);

// Time stepper bound to one (model, grid, dt); owns all work buffers.
class Stepper {
 public:
  Stepper(const ModelSpec& model, GridPtr grid, double dt,
          const EvolveOpts& opts)
      : model_(model),
        grid_(std::move(grid)),
        tf_(transformer_for(grid_)),
        dt_(dt),
        opts_(opts),
        solver_(opts.stage_solver.value_or(default_stage_solver(model))),
        n_(grid_->size()),
        ncomp_(model.is_system() ? 2 : 1) {
    nu_ = model_.nonlinear_coeff();
    ik_nl_.assign(grid_->k().begin(), grid_->k().end());
    ik_nl_[grid_->nyquist_index()] = 0.0;
    ik_ = ik_nl_;
    neg_ik_ = ik_;
    for (double& v : neg_ik_) v = -v;
    for (double& v : ik_nl_) v *= -0.5 * nu_;
    if (ncomp_ == 1) {
      neg_phase_ = model_.linear_phase(*grid_);
      for (double& v : neg_phase_) v = -v;
    } else {
      msym_ = symbol_on_grid(model_.dispersion_symbol(), *grid_);
    }
    for (auto& bufs : {&k1_, &k2_, &y1_, &y2_, &y1p_, &y2p_, &f_})
      bufs->assign(ncomp_, Vec(n_));
    phys_.assign(ncomp_, std::vector<double>(n_));
    work_r_.resize(n_);
    work_c_.resize(n_);
    if (solver_ == StageSolver::simplified_newton) build_stage_inverse();
  }

  // K = F(Y), the model RHS in the model's own time variable and frame.
  void eval_rhs(const std::vector<Vec>& y, std::vector<Vec>& f) {
    if (ncomp_ == 1) {
      tf_.to_values(y[0].data(), phys_[0].data());
      kern::rmul(phys_[0].data(), phys_[0].data(), work_r_.data(), n_);
      tf_.to_coeffs(work_r_.data(), work_c_.data());
      kern::cmul_imag(y[0].data(), neg_phase_.data(), f[0].data(), n_);
      kern::cmul_imag(work_c_.data(), ik_nl_.data(), work_c_.data(), n_);
      kern::caxpy(f[0].data(), 1.0, work_c_.data(), f[0].data(), n_);
      return;
    }
    // components: [0] = u, [1] = eta
    tf_.to_values(y[0].data(), phys_[0].data());
    tf_.to_values(y[1].data(), phys_[1].data());
    // u-equation: u' = -ik (η̂ + (ε/2)(u²)^ - c û)
    kern::rmul(phys_[0].data(), phys_[0].data(), work_r_.data(), n_);
    tf_.to_coeffs(work_r_.data(), work_c_.data());
    kern::caxpy(y[1].data(), 0.5 * nu_, work_c_.data(), work_c_.data(), n_);
    kern::caxpy(work_c_.data(), -model_.c, y[0].data(), work_c_.data(), n_);
    kern::cmul_imag(work_c_.data(), neg_ik_.data(), f[0].data(), n_);
    // η-equation: η' = -ik (M û + ε(ηu)^ - c η̂)
    kern::rmul(phys_[1].data(), phys_[0].data(), work_r_.data(), n_);
    tf_.to_coeffs(work_r_.data(), work_c_.data());
    kern::cscale(work_c_.data(), nu_, work_c_.data(), n_);
    std::vector<cplx>& tmp = f[1];
    kern::cmul_real(y[0].data(), msym_.data(), tmp.data(), n_);
    kern::caxpy(tmp.data(), 1.0, work_c_.data(), tmp.data(), n_);
    kern::caxpy(tmp.data(), -model_.c, y[1].data(), tmp.data(), n_);
    kern::cmul_imag(tmp.data(), neg_ik_.data(), f[1].data(), n_);
  }

  // One step from y (in place).  Throws StageDivergence on failure.
  void advance(std::vector<Vec>& y, double t) {
    eval_rhs(y, k1_);
    for (int c = 0; c < ncomp_; ++c) k2_[c] = k1_[c];
    build_stages(y, y1_, y2_);
    double prev_incr = std::numeric_limits<double>::infinity();
    int grew = 0;
    bool done = false;
    for (int it = 0; it < opts_.stage_max_iter; ++it) {
      if (solver_ == StageSolver::fixed_point) {
        eval_rhs(y1_, f_);
        for (int c = 0; c < ncomp_; ++c) std::swap(k1_[c], f_[c]);
        eval_rhs(y2_, f_);
        for (int c = 0; c < ncomp_; ++c) std::swap(k2_[c], f_[c]);
      } else {
        newton_update();
      }
      build_stages(y, y1p_, y2p_);
      double incr2 = 0.0;
      for (int c = 0; c < ncomp_; ++c) {
        const double d1 = kern::cdiff_norm2(y1p_[c].data(), y1_[c].data(), n_);
        const double d2 = kern::cdiff_norm2(y2p_[c].data(), y2_[c].data(), n_);
        incr2 += d1 * d1 + d2 * d2;
      }
      const double incr = std::sqrt(incr2);
      for (int c = 0; c < ncomp_; ++c) {
        std::swap(y1_[c], y1p_[c]);
        std::swap(y2_[c], y2p_[c]);
      }
      if (!std::isfinite(incr))
        throw StageDivergence("stage iteration produced non-finite values", t,
                              it + 1);
      if (incr <= opts_.stage_tol) {
        done = true;
        break;
      }
      grew = (incr > prev_incr) ? grew + 1 : 0;
      if (grew >= 3)
        throw StageDivergence("stage iteration diverging", t, it + 1);
      prev_incr = incr;
    }
    if (!done)
      throw StageDivergence("stage iteration exceeded max iterations", t,
                            opts_.stage_max_iter);
    for (int c = 0; c < ncomp_; ++c) {
      kern::clincomb2(y[c].data(), 0.5 * dt_, k1_[c].data(), 0.5 * dt_,
                      k2_[c].data(), y[c].data(), n_);
      if (opts_.krasny_threshold > 0.0)
        kern::czero_below(y[c].data(), opts_.krasny_threshold, n_);
    }
  }

  int ncomp() const { return ncomp_; }

 private:
  void build_stages(const std::vector<Vec>& y, std::vector<Vec>& s1,
                    std::vector<Vec>& s2) {
    for (int c = 0; c < ncomp_; ++c) {
      kern::clincomb2(y[c].data(), dt_ * A11, k1_[c].data(), dt_ * A12,
                      k2_[c].data(), s1[c].data(), n_);
      kern::clincomb2(y[c].data(), dt_ * A21, k1_[c].data(), dt_ * A22,
                      k2_[c].data(), s2[c].data(), n_);
    }
  }

  // Simplified Newton: the iteration matrix keeps only the (diagonal in k)
  // linear part, so (I - dt A⊗L)^{-1} is precomputed per mode.
  void build_stage_inverse() {
    if (ncomp_ == 1) {
      inv2_.resize(n_);
      for (int m = 0; m < n_; ++m) {
        const cplx lam(0.0, neg_phase_[m]);  // λ = -i w
        const cplx b11 = 1.0 - dt_ * A11 * lam, b12 = -dt_ * A12 * lam;
        const cplx b21 = -dt_ * A21 * lam, b22 = 1.0 - dt_ * A22 * lam;
        const cplx det = b11 * b22 - b12 * b21;
        inv2_[m] = {b22 / det, -b12 / det, -b21 / det, b11 / det};
      }
      return;
    }
    inv4_.resize(n_);
    for (int m = 0; m < n_; ++m) {
      // L(k) acting on (u, η): u' = ik(c u - η), η' = ik(c η - M u)
      const cplx ik(0.0, ik_[m]);
      const cplx luu = ik * model_.c, lue = -ik;
      const cplx leu = -ik * msym_[m], lee = ik * model_.c;
      std::array<std::array<cplx, 4>, 4> s{};
      const double a[2][2] = {{A11, A12}, {A21, A22}};
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj) {
          const double f = dt_ * a[i][jj];
          s[2 * i][2 * jj] = -f * luu;
          s[2 * i][2 * jj + 1] = -f * lue;
          s[2 * i + 1][2 * jj] = -f * leu;
          s[2 * i + 1][2 * jj + 1] = -f * lee;
        }
      for (int i = 0; i < 4; ++i) s[i][i] += 1.0;
      solve4(s, inv4_[m].data());
    }
  }

  void newton_update() {
    eval_rhs(y1_, f_);
    for (int c = 0; c < ncomp_; ++c)
      kern::caxpy(f_[c].data(), -1.0, k1_[c].data(), f_[c].data(), n_);
    std::vector<Vec>& r1 = f_;
    if (ncomp_ == 1) {
      // stash residual 1, compute residual 2, then apply the 2x2 inverses
      res1_ = r1[0];
      eval_rhs(y2_, f_);
      kern::caxpy(f_[0].data(), -1.0, k2_[0].data(), f_[0].data(), n_);
      for (int m = 0; m < n_; ++m) {
        const auto& iv = inv2_[m];
        const cplx d1 = iv[0] * res1_[m] + iv[1] * f_[0][m];
        const cplx d2 = iv[2] * res1_[m] + iv[3] * f_[0][m];
        k1_[0][m] += d1;
        k2_[0][m] += d2;
      }
      return;
    }
    res1_ = r1[0];
    res2_ = r1[1];
    eval_rhs(y2_, f_);
    for (int c = 0; c < ncomp_; ++c)
      kern::caxpy(f_[c].data(), -1.0, k2_[c].data(), f_[c].data(), n_);
    for (int m = 0; m < n_; ++m) {
      const std::array<cplx, 4> r = {res1_[m], res2_[m], f_[0][m], f_[1][m]};
      const auto& iv = inv4_[m];
      for (int i = 0; i < 4; ++i) {
        cplx d(0.0, 0.0);
        for (int jj = 0; jj < 4; ++jj) d += iv[4 * i + jj] * r[jj];
        if (i == 0) k1_[0][m] += d;
        else if (i == 1) k1_[1][m] += d;
        else if (i == 2) k2_[0][m] += d;
        else k2_[1][m] += d;
      }
    }
  }

  ModelSpec model_;
  GridPtr grid_;
  Transformer& tf_;
  double dt_;
  EvolveOpts opts_;
  StageSolver solver_;
  int n_;
  int ncomp_;
  double nu_;
  std::vector<double> ik_nl_;     // -ν/2 · k (Nyquist dropped)
  std::vector<double> ik_;        // k (Nyquist dropped)
  std::vector<double> neg_ik_;    // -k (Nyquist dropped)
  std::vector<double> neg_phase_;  // -w(k), scalar families
  std::vector<double> msym_;       // M(k), system
  std::vector<Vec> k1_, k2_, y1_, y2_, y1p_, y2p_, f_;
  std::vector<std::vector<double>> phys_;
  std::vector<double> work_r_;
  Vec work_c_;
  Vec res1_, res2_;
  std::vector<std::array<cplx, 4>> inv2_;
  std::vector<std::array<cplx, 16>> inv4_;
};

// Gauss-Jordan inverse of a 4x4 complex matrix (row-major output).
void solve4(std::array<std::array<cplx, 4>, 4>& a, cplx* inv) {
  std::array<std::array<cplx, 4>, 4> e{};
  for (int i = 0; i < 4; ++i) e[i][i] = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(e[col], e[piv]);
    const cplx d = a[col][col];
    for (int j = 0; j < 4; ++j) {
      a[col][j] /= d;
      e[col][j] /= d;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const cplx f = a[r][col];
      if (f == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < 4; ++j) {
        a[r][j] -= f * a[col][j];
        e[r][j] -= f * e[col][j];
      }
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[4 * i + j] = e[i][j];
}

std::vector<Vec> state_to_vecs(const ModelSpec& model, const State& s) {
  std::vector<Vec> y;
  y.push_back(s.u.coeffs());
  if (model.is_system()) y.push_back(s.eta->coeffs());
  return y;
}

State vecs_to_state(const ModelSpec& model, const GridPtr& g,
                    const std::vector<Vec>& y, double t) {
  if (model.is_system())
    return State::system(SpectralField(g, y[1]), SpectralField(g, y[0]), t);
  return State::scalar(SpectralField(g, y[0]), t);
}

double tail_floor(const Grid& g, const std::vector<Vec>& y) {
  double worst = 0.0;
  const int n = g.size();
  const int half = n / 2;
  const int band = std::max(1, half / 10);
  for (const Vec& c : y) {
    const double peak = kern::cmax_abs(c.data(), n);
    if (peak == 0.0) continue;
    double tail = 0.0;
    // |k| in the top 10%: indices around the Nyquist point
    for (int m = half - band; m <= half + band && m < n; ++m)
      tail = std::max(tail, std::abs(c[m]));
    worst = std::max(worst, tail / peak);
  }
  return worst;
}

bool has_nan(const std::vector<Vec>& y) {
  for (const Vec& c : y)
    for (const cplx& z : c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return true;
  return false;
}

}  // namespace

State step(const ModelSpec& model, const State& state, double dt,
           const EvolveOpts& opts) {
  model.validate();
  check_state(model, state);
  if (dt == 0.0) return state;
  Stepper stepper(model, state.u.grid_ptr(), dt, opts);
  auto y = state_to_vecs(model, state);
  stepper.advance(y, state.time);
  return vecs_to_state(model, state.u.grid_ptr(), y, state.time + dt);
}

Trajectory evolve(const ModelSpec& model, const State& initial,
                  const EvolveOpts& opts) {
  model.validate();
  opts.validate();
  check_state(model, initial);
  const GridPtr grid = initial.u.grid_ptr();
  const double t0 = initial.time;
  if (!(opts.t_final > t0))
    throw ConfigError("T-final must exceed the initial time");
  const double dt = (opts.t_final - t0) / opts.nt;
  const long snap_every =
      opts.snapshot_every > 0
          ? opts.snapshot_every
          : std::max<long>(opts.record_every,
                           (opts.nt / 16 / std::max<long>(1, opts.record_every)) *
                               opts.record_every);

  Stepper stepper(model, grid, dt, opts);
  auto y = state_to_vecs(model, initial);

  Trajectory traj;
  traj.model = model;
  double energy0 = 0.0;

  auto record = [&](long n, bool force_snapshot) {
    const double t = t0 + n * dt;
    State s = vecs_to_state(model, grid, y, t);
    const Conserved cons = conserved(model, s);
    NormSet nu = norms(s.u, 1);
    DiagnosticsRow row;
    row.t = t;
    if (model.is_system()) {
      NormSet ne = norms(*s.eta, 1);
      row.linf = std::max(nu.linf, ne.linf);
      row.l2 = std::hypot(nu.l2, ne.l2);
      row.dx_l2 = std::hypot(nu.dx_l2, ne.dx_l2);
    } else {
      row.linf = nu.linf;
      row.l2 = nu.l2;
      row.dx_l2 = nu.dx_l2;
    }
    row.mass = cons.mass;
    row.momentum = cons.momentum;
    row.energy = cons.energy;
    if (traj.diagnostics.empty()) energy0 = cons.energy;
    row.energy_drift =
        energy0 != 0.0 ? std::fabs(1.0 - cons.energy / energy0)
                       : std::fabs(cons.energy - energy0);
    row.floor = tail_floor(*grid, y);
    traj.diagnostics.push_back(row);

    SpectrumRecord rec;
    rec.t = t;
    for (const Vec& c : y) {
      std::vector<double> half(grid->size() / 2 + 1);
      for (int m = 0; m <= grid->size() / 2; ++m) half[m] = std::abs(c[m]);
      rec.abs_coeffs.push_back(std::move(half));
    }
    traj.spectra.push_back(std::move(rec));

    if (force_snapshot || (snap_every > 0 && n % snap_every == 0))
      traj.snapshots.emplace_back(t, std::move(s));
    return row.floor;
  };

  record(0, true);
  long n = 0;
  StopCause cause = StopCause::completed;
  std::string detail;
  while (n < opts.nt) {
    try {
      stepper.advance(y, t0 + n * dt);
    } catch (const StageDivergence& e) {
      cause = StopCause::stage_divergence;
      detail = e.what();
      break;
    }
    ++n;
    const bool at_end = (n == opts.nt);
    if (n % opts.record_every == 0 || at_end) {
      if (has_nan(y)) {
        cause = StopCause::nan_detected;
        detail = "non-finite coefficients";
        break;
      }
      const double floor = record(n, at_end);
      if (floor > opts.floor_stop && !at_end) {
        cause = StopCause::resolution_loss;
        detail = "spectral tail above floor threshold";
        break;
      }
    }
  }
  const double t_end = t0 + n * dt;
  if (!has_nan(y)) {
    // make sure the terminal state is available for post-mortem analysis
    if (traj.diagnostics.empty() || traj.diagnostics.back().t < t_end)
      record(n, true);
    else if (traj.snapshots.empty() || traj.snapshots.back().first < t_end)
      traj.snapshots.emplace_back(t_end, vecs_to_state(model, grid, y, t_end));
  }
  traj.stop_cause = cause;
  traj.steps_taken = n;
  traj.stop_time = t0 + n * dt;
  traj.stop_detail = detail;
  return traj;
}

}  // namespace wlab
