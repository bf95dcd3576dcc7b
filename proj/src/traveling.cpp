#include "wlab/traveling.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/errors.hpp"
#include "wlab/kernels.hpp"

namespace wlab {

State TravelingWave::as_state() const {
  if (eta) return State::system(*eta, u, 0.0);
  return State::scalar(u, 0.0);
}

namespace {

std::vector<double> sech2_profile(const Grid& g, double amplitude,
                                  double width) {
  std::vector<double> u(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double s = 1.0 / std::cosh(width * g.x()[j]);
    u[j] = amplitude * s * s;
  }
  return u;
}

SpectralField derived_eta(const SpectralField& u, double c, double eps) {
  // N = cU - (ε/2)U² pointwise (system traveling-wave relation)
  std::vector<double> up = u.values();
  for (double& v : up) v = c * v - 0.5 * eps * v * v;
  return transform(up, u.grid_ptr());
}

// --- solver internals: unknowns are the real coefficients a_m = û(m),
// m = 0..N/2, of an even real field (cosine series).  This removes the
// translation zero-mode from the Jacobian. ---

struct HalfSpace {
  GridPtr grid;
  int n;      // full size
  int h;      // N/2 + 1
  Transformer* tf;

  explicit HalfSpace(GridPtr g)
      : grid(std::move(g)), n(grid->size()), h(n / 2 + 1),
        tf(&transformer_for(grid)) {}

  void embed(const std::vector<double>& a, std::vector<cplx>& full) const {
    full.assign(n, cplx(0.0, 0.0));
    for (int m = 0; m < h; ++m) full[m] = cplx(a[m], 0.0);
    for (int m = h; m < n; ++m) full[m] = cplx(a[n - m], 0.0);
  }

  std::vector<double> project(const std::vector<cplx>& full) const {
    std::vector<double> a(h);
    for (int m = 0; m < h; ++m) a[m] = full[m].real();
    return a;
  }

  void to_phys(const std::vector<double>& a, std::vector<cplx>& full,
               std::vector<double>& phys) const {
    embed(a, full);
    phys.resize(n);
    tf->to_values(full.data(), phys.data());
  }

  std::vector<double> from_phys(const std::vector<double>& phys,
                                std::vector<cplx>& full) const {
    full.resize(n);
    tf->to_coeffs(phys.data(), full.data());
    return project(full);
  }

  // l2 of the full conjugate-symmetric vector represented by a.
  double norm(const std::vector<double>& a) const {
    double s = a[0] * a[0] + a[h - 1] * a[h - 1];
    for (int m = 1; m < h - 1; ++m) s += 2.0 * a[m] * a[m];
    return std::sqrt(s);
  }

  double dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = a[0] * b[0] + a[h - 1] * b[h - 1];
    for (int m = 1; m < h - 1; ++m) s += 2.0 * a[m] * b[m];
    return s;
  }
};

// Traveling-wave operator F and its linearization at the current iterate.
struct TwOperator {
  const ModelSpec& model;
  const HalfSpace& hs;
  std::vector<double> sym;    // m(k) or M(k) on the half spectrum
  std::vector<double> diag;   // linear diagonal m(k)-c or M(k)-c²
  std::vector<double> precond;
  double c;

  std::vector<double> u_phys;    // current iterate, physical space
  std::vector<double> jac_mult;  // pointwise multiplier of the linearization

  mutable std::vector<cplx> cbuf;
  mutable std::vector<double> rbuf;

  TwOperator(const ModelSpec& m, double c_, const HalfSpace& hs_)
      : model(m), hs(hs_), c(c_) {
    const SymbolSpec spec = model.dispersion_symbol();
    sym.resize(hs.h);
    diag.resize(hs.h);
    precond.assign(hs.h, 1.0);
    for (int i = 0; i < hs.h; ++i) {
      const double k = i / hs.grid->half_width();
      sym[i] = eval_symbol(spec, k);
      diag[i] = model.is_system() ? sym[i] - c * c : sym[i] - c;
      // The capillary multipliers grow in k and m̃(k) = c has a real root
      // (resonant mode) once c exceeds the dispersion minimum; solving the
      // equation divided by the regularized linear part keeps GMRES
      // well-conditioned there.  The β = 0 symbols are bounded with a
      // sign-definite diagonal, where no preconditioning is needed.
      if (model.has_surface_tension()) {
        const double floor_mag = 0.05 * std::max(1.0, std::fabs(c));
        const double mag = std::max(std::fabs(diag[i]), floor_mag);
        precond[i] = 1.0 / std::copysign(mag, diag[i] == 0.0 ? 1.0 : diag[i]);
      }
    }
  }

  void set_iterate(const std::vector<double>& a) {
    hs.to_phys(a, cbuf, rbuf);
    u_phys = rbuf;
    jac_mult.resize(hs.n);
    const double eps = model.eps;
    if (model.is_system()) {
      for (int j = 0; j < hs.n; ++j)
        jac_mult[j] =
            3.0 * eps * c * u_phys[j] - 1.5 * eps * eps * u_phys[j] * u_phys[j];
    } else {
      for (int j = 0; j < hs.n; ++j) jac_mult[j] = eps * u_phys[j];
    }
  }

  // F(a); also refreshes the linearization point.
  std::vector<double> residual(const std::vector<double>& a) {
    set_iterate(a);
    const double eps = model.eps;
    std::vector<double> q(hs.n);
    if (model.is_system()) {
      for (int j = 0; j < hs.n; ++j) {
        const double u = u_phys[j];
        q[j] = 1.5 * eps * c * u * u - 0.5 * eps * eps * u * u * u;
      }
    } else {
      for (int j = 0; j < hs.n; ++j) q[j] = 0.5 * eps * u_phys[j] * u_phys[j];
    }
    std::vector<double> f = hs.from_phys(q, cbuf);
    for (int m = 0; m < hs.h; ++m) f[m] += diag[m] * a[m];
    return f;
  }

  // Jv = diag·v + (jac_mult · v)^, preconditioned by `precond`.
  std::vector<double> apply_jacobian(const std::vector<double>& v) const {
    hs.embed(v, cbuf);
    rbuf.resize(hs.n);
    hs.tf->to_values(cbuf.data(), rbuf.data());
    kern::rmul(rbuf.data(), jac_mult.data(), rbuf.data(), hs.n);
    hs.tf->to_coeffs(rbuf.data(), cbuf.data());
    std::vector<double> out(hs.h);
    for (int m = 0; m < hs.h; ++m)
      out[m] = precond[m] * (diag[m] * v[m] + cbuf[m].real());
    return out;
  }

  std::vector<double> preconditioned(std::vector<double> f) const {
    for (int m = 0; m < hs.h; ++m) f[m] *= precond[m];
    return f;
  }
};

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
// Returns the approximate solution of op(x) = b starting from x = 0.
std::vector<double> gmres(const TwOperator& op, const std::vector<double>& b,
                          double rel_tol, int restart, int max_outer,
                          const HalfSpace& hs) {
  const int h = hs.h;
  std::vector<double> x(h, 0.0);
  const double bnorm = hs.norm(b);
  if (bnorm == 0.0) return x;

  for (int outer = 0; outer < max_outer; ++outer) {
    // r = b - A x
    std::vector<double> r = b;
    if (outer > 0) {
      std::vector<double> ax = op.apply_jacobian(x);
      for (int i = 0; i < h; ++i) r[i] -= ax[i];
    }
    double beta = hs.norm(r);
    if (beta / bnorm <= rel_tol) return x;

    std::vector<std::vector<double>> v;
    v.reserve(restart + 1);
    std::vector<double> v0 = r;
    for (double& e : v0) e /= beta;
    v.push_back(std::move(v0));

    std::vector<std::vector<double>> hess(restart + 1,
                                          std::vector<double>(restart, 0.0));
    std::vector<double> cs(restart, 0.0), sn(restart, 0.0), g(restart + 1, 0.0);
    g[0] = beta;
    int inner = 0;
    for (; inner < restart; ++inner) {
      std::vector<double> w = op.apply_jacobian(v[inner]);
      for (int i = 0; i <= inner; ++i) {
        hess[i][inner] = hs.dot(w, v[i]);
        for (int j2 = 0; j2 < h; ++j2) w[j2] -= hess[i][inner] * v[i][j2];
      }
      hess[inner + 1][inner] = hs.norm(w);
      if (hess[inner + 1][inner] > 1e-14 * bnorm) {
        for (double& e : w) e /= hess[inner + 1][inner];
        v.push_back(std::move(w));
      }
      // apply stored rotations, then the new one
      for (int i = 0; i < inner; ++i) {
        const double t = cs[i] * hess[i][inner] + sn[i] * hess[i + 1][inner];
        hess[i + 1][inner] =
            -sn[i] * hess[i][inner] + cs[i] * hess[i + 1][inner];
        hess[i][inner] = t;
      }
      const double denom =
          std::hypot(hess[inner][inner], hess[inner + 1][inner]);
      cs[inner] = hess[inner][inner] / denom;
      sn[inner] = hess[inner + 1][inner] / denom;
      hess[inner][inner] = denom;
      hess[inner + 1][inner] = 0.0;
      g[inner + 1] = -sn[inner] * g[inner];
      g[inner] = cs[inner] * g[inner];
      if (std::fabs(g[inner + 1]) / bnorm <= rel_tol ||
          static_cast<int>(v.size()) == inner + 1) {
        ++inner;
        break;
      }
    }
    // back substitution
    std::vector<double> y(inner, 0.0);
    for (int i = inner - 1; i >= 0; --i) {
      double s = g[i];
      for (int j2 = i + 1; j2 < inner; ++j2) s -= hess[i][j2] * y[j2];
      y[i] = s / hess[i][i];
    }
    for (int i = 0; i < inner; ++i)
      for (int j2 = 0; j2 < h; ++j2) x[j2] += y[i] * v[i][j2];
    if (std::fabs(g[inner]) / bnorm <= rel_tol) return x;
  }
  return x;
}

TravelingWave finish_wave(const ModelSpec& model, double c,
                          const HalfSpace& hs, const std::vector<double>& a,
                          double res) {
  std::vector<cplx> full;
  hs.embed(a, full);
  SpectralField u(hs.grid, std::move(full));
  TravelingWave w{model, c, u, std::nullopt, res, 0.0, 0.0};
  w.model.c = c;
  if (model.is_system()) w.eta = derived_eta(u, c, model.eps);
  std::vector<double> up = u.values();
  double m2 = 0.0;
  for (double uv : up) m2 += uv * uv;
  w.mass = hs.grid->spacing() * m2;
  w.energy = conserved(w.model, w.as_state()).energy;
  return w;
}

}  // namespace

TravelingWave kdv_soliton(ModelFamily family, double eps, double beta,
                          double speed_offset, GridPtr grid) {
  ModelSpec model;
  model.family = family;
  model.eps = eps;
  model.beta = beta;
  model.validate();
  if (family == ModelFamily::kdv)
    throw ConfigError("kdv solitons are of the whitham limit form; pick the "
                      "whitham or boussinesq family");
  const double c = 1.0 + speed_offset * eps;
  model.c = c;

  double amplitude, width_sq;
  if (family == ModelFamily::boussinesq) {
    amplitude = 2.0 * speed_offset;
    width_sq = 1.5 * speed_offset;
    if (!(speed_offset > 0.0))
      throw ConfigError("boussinesq KdV iterate needs a positive speed offset");
  } else {
    amplitude = 3.0 * speed_offset;
    const double denom = beta > 0.0 ? 1.0 - 3.0 * beta : 1.0;
    if (beta > 0.0 && denom == 0.0)
      throw ConfigError("beta = 1/3 is the degenerate KdV-limit value");
    width_sq = 1.5 * speed_offset / denom;
    if (!(width_sq > 0.0))
      throw ConfigError(
          "speed offset sign incompatible with the dispersion: need "
          "delta(1-3beta) > 0 (depression waves for beta > 1/3)");
  }
  SpectralField u =
      transform(sech2_profile(*grid, amplitude, std::sqrt(width_sq)), grid);

  HalfSpace hs(grid);
  TwOperator op(model, c, hs);
  std::vector<double> a = hs.project(u.coeffs());
  std::vector<double> f = op.residual(a);
  TravelingWave w = finish_wave(model, c, hs, a, hs.norm(f));
  return w;
}

SolveReport solve_traveling_wave(const ModelSpec& model, double c,
                                 const SpectralField& initial,
                                 const NewtonOpts& opts) {
  model.validate();
  SolveReport rep;
  HalfSpace hs(initial.grid_ptr());
  TwOperator op(model, c, hs);

  // reality/evenness is enforced by construction: only cosine coefficients
  // enter the iteration
  std::vector<double> a = hs.project(initial.coeffs());
  std::vector<double> f = op.residual(a);
  double res = hs.norm(f);
  rep.residual_history.push_back(res);

  // Extra steps below newton_tol push the residual to the rounding floor,
  // which keeps the time derivative of the wave at solver-noise level.
  int polish_left = 2;
  for (int it = 0; it < opts.max_newton; ++it) {
    if (res <= opts.newton_tol) {
      rep.converged = true;
      if (polish_left == 0) break;
      --polish_left;
    }
    std::vector<double> rhs = op.preconditioned(f);
    for (double& e : rhs) e = -e;
    std::vector<double> d =
        gmres(op, rhs, opts.gmres_tol, opts.gmres_restart, 4, hs);

    // damped update: halve until the residual stops growing
    double lambda = 1.0;
    std::vector<double> a_try(hs.h), f_try;
    double res_try = 0.0;
    bool accepted = false;
    for (int ls = 0; ls <= opts.max_line_search; ++ls) {
      for (int m = 0; m < hs.h; ++m) a_try[m] = a[m] + lambda * d[m];
      f_try = op.residual(a_try);
      res_try = hs.norm(f_try);
      if (std::isfinite(res_try) && res_try < res) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      if (rep.converged) break;  // polishing hit the rounding floor
      rep.message = "line search failed to reduce the residual";
      break;
    }
    a = a_try;
    f = f_try;
    res = res_try;
    rep.residual_history.push_back(res);
    rep.newton_iters = it + 1;

    // stagnation: less than 10% total reduction over the last 5 steps
    const auto& h = rep.residual_history;
    if (res > opts.newton_tol && h.size() >= 6 &&
        res > 0.9 * h[h.size() - 6]) {
      rep.message = "Newton stagnated (residual reduction < 10% over 5 steps)";
      break;
    }
  }
  if (!rep.converged && rep.message.empty() && res > opts.newton_tol)
    rep.message = "Newton did not converge within max-newton iterations";
  if (res <= opts.newton_tol) rep.converged = true;

  // Reject the trivial roots the discrete equation also admits: U = 0 and
  // the constant U = 2(c-1)/ε.  A solitary wave must decay at the domain
  // boundary x = -Lπ (grid point 0).
  if (rep.converged) {
    double peak = 0.0;
    for (double v : op.u_phys) peak = std::max(peak, std::fabs(v));
    const double delta = (c - 1.0) / model.eps;
    if (peak <= 1e-3 * std::max(1e-6, 3.0 * std::fabs(delta))) {
      rep.converged = false;
      rep.message = "iteration collapsed to the trivial zero solution";
    } else if ([&] {
                 double lo = op.u_phys[0], hi = op.u_phys[0];
                 for (double v : op.u_phys) {
                   lo = std::min(lo, v);
                   hi = std::max(hi, v);
                 }
                 return hi - lo < 1e-3 * peak;
               }()) {
      // the constant root 2(c-1)/ε also satisfies the discrete equation;
      // capillary waves keep their (small) resonant ripples and pass here
      rep.converged = false;
      rep.message = "iteration collapsed to the constant branch";
    } else {
      // grid-scale spikes solve the discrete equation at any speed; a real
      // wave has Fourier coefficients decaying to rounding level
      double cmax = 0.0, tail = 0.0;
      for (int m = 0; m < hs.h; ++m) cmax = std::max(cmax, std::fabs(a[m]));
      for (int m = hs.h - 1 - (hs.h - 1) / 10; m < hs.h; ++m)
        tail = std::max(tail, std::fabs(a[m]));
      if (tail > 1e-6 * cmax) {
        rep.converged = false;
        rep.message = "converged profile is not spectrally resolved "
                      "(coefficient tail above noise)";
      }
    }
  }

  rep.residual = res;
  std::vector<cplx> full;
  hs.embed(a, full);
  rep.last_iterate = SpectralField(hs.grid, std::move(full));
  if (rep.converged) rep.wave = finish_wave(model, c, hs, a, res);
  return rep;
}

Branch continuation_sweep(const ModelSpec& model,
                          const std::vector<double>& c_values, GridPtr grid,
                          const NewtonOpts& opts) {
  if (c_values.empty()) throw ConfigError("continuation needs at least one c");
  Branch branch;
  std::optional<SpectralField> seed;
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    const double c = c_values[i];
    SpectralField init = seed ? *seed
                              : kdv_soliton(model.family, model.eps, model.beta,
                                            (c - 1.0) / model.eps, grid)
                                    .u;
    SolveReport rep = solve_traveling_wave(model, c, init, opts);
    if (!rep.converged) {
      if (i == 0)
        throw NonConvergence("continuation failed at the first speed c = " +
                             std::to_string(c) + ": " + rep.message);
      branch.edge_message = "stopped at c = " + std::to_string(c) + ": " +
                            rep.message;
      branch.complete = false;
      return branch;
    }
    TravelingWave& w = branch.waves.emplace_back(std::move(*rep.wave));
    std::vector<double> up = w.u.values();
    double peak = 0.0;
    for (double v : up)
      if (std::fabs(v) > std::fabs(peak)) peak = v;
    branch.table.push_back(
        {c, peak, w.mass, w.energy, w.residual, grid->size()});
    branch.edge_c = c;
    seed = w.u;
  }
  branch.complete = true;
  return branch;
}

TravelingWave resolve_soliton(const ModelSpec& model, double c, GridPtr grid,
                              const NewtonOpts& opts_in) {
  NewtonOpts opts = opts_in;
  if (model.has_surface_tension()) {
    // the resonant mode of the capillary dispersion asks for deeper Krylov
    // spaces and accurate directions
    opts.gmres_restart = std::max(opts.gmres_restart, 80);
    opts.gmres_tol = std::min(opts.gmres_tol, 1e-5);
  }
  const double delta = (c - 1.0) / model.eps;
  auto try_solve = [&](double speed, const SpectralField& init)
      -> std::optional<TravelingWave> {
    SolveReport rep = solve_traveling_wave(model, speed, init, opts);
    if (rep.converged) return rep.wave;
    return std::nullopt;
  };

  // direct attempt from the KdV iterate
  SpectralField init =
      kdv_soliton(model.family, model.eps, model.beta, delta, grid).u;
  if (auto w = try_solve(c, init)) return *w;

  // continuation from a small offset toward the target
  const double d0 = 0.25 * (std::fabs(delta) <= 1.0 ? delta
                                                    : (delta > 0 ? 1.0 : -1.0));
  SpectralField cur =
      kdv_soliton(model.family, model.eps, model.beta, d0, grid).u;
  double c_cur = 1.0 + d0 * model.eps;
  auto w0 = try_solve(c_cur, cur);
  if (!w0)
    throw NonConvergence(
        "soliton construction failed even at small speed offset");
  cur = w0->u;
  int guard = 0;
  double step = (c - c_cur) / 8.0;
  while (std::fabs(c - c_cur) > 1e-14 && guard++ < 200) {
    double next = (std::fabs(c - c_cur) <= std::fabs(step) * 1.0000001)
                      ? c
                      : c_cur + step;
    if (auto w = try_solve(next, cur)) {
      cur = w->u;
      c_cur = next;
      if (c_cur == c) return *w;
    } else {
      step *= 0.5;
      if (std::fabs(step) < 1e-6 * std::fabs(c - 1.0) + 1e-12)
        throw NonConvergence("soliton continuation stalled near c = " +
                             std::to_string(c_cur));
    }
  }
  throw NonConvergence("soliton continuation did not reach c = " +
                       std::to_string(c));
}

}  // namespace wlab
