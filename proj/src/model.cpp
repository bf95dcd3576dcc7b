#include "wlab/model.hpp"

#include <cmath>

#include "wlab/errors.hpp"
#include "wlab/kernels.hpp"

namespace wlab {

std::string family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::whitham: return "whitham";
    case ModelFamily::kdv: return "kdv";
    case ModelFamily::boussinesq: return "boussinesq";
  }
  return "?";
}

std::string time_scale_name(TimeScale s) {
  return s == TimeScale::tau ? "tau" : "t";
}

void ModelSpec::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ConfigError("model epsilon must be positive");
  if (beta < 0.0 || !std::isfinite(beta))
    throw ConfigError("surface tension beta must be nonnegative");
  if (!std::isfinite(c)) throw ConfigError("frame speed c must be finite");
  if (scale == TimeScale::tau && family == ModelFamily::boussinesq)
    throw ConfigError("tau scaling is only defined for the scalar equations");
}

SymbolSpec ModelSpec::dispersion_symbol() const {
  switch (family) {
    case ModelFamily::whitham:
      return {has_surface_tension() ? SymbolKind::whitham_st
                                    : SymbolKind::whitham,
              eps, beta};
    case ModelFamily::kdv:
      return {SymbolKind::kdv_cubic, eps, beta};
    case ModelFamily::boussinesq:
      return {has_surface_tension() ? SymbolKind::boussinesq_p
                                    : SymbolKind::boussinesq_t2,
              eps, beta};
  }
  return {};
}

namespace {

// ω(k) for the scalar families in the lab frame, physical time.
inline double scalar_omega(const ModelSpec& m, double k) {
  if (m.family == ModelFamily::kdv)
    return k - 0.5 * m.eps * (1.0 / 3.0 - m.beta) * k * k * k;
  return eval_symbol(m.dispersion_symbol(), k) * k;
}

}  // namespace

std::vector<double> ModelSpec::linear_phase(const Grid& grid) const {
  if (is_system())
    throw ContractViolation("linear_phase is defined for scalar families");
  const double denom = (scale == TimeScale::tau) ? eps : 1.0;
  std::vector<double> w(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    const double k = grid.k()[m];
    w[m] = (scalar_omega(*this, k) - c * k) / denom;
  }
  w[grid.nyquist_index()] = 0.0;
  return w;
}

double ModelSpec::nonlinear_coeff() const {
  return scale == TimeScale::tau ? 1.0 : eps;
}

State State::scalar(SpectralField u0, double t0) {
  return State{std::move(u0), std::nullopt, t0};
}

State State::system(SpectralField eta0, SpectralField u0, double t0) {
  return State{std::move(u0), std::move(eta0), t0};
}

void check_state(const ModelSpec& model, const State& state) {
  if (model.is_system() != state.eta.has_value())
    throw ContractViolation("state does not match the model family");
  if (state.eta && !state.eta->grid().same_as(state.u.grid()))
    throw ContractViolation("eta and u live on different grids");
}

StateDeriv rhs(const ModelSpec& model, const State& state) {
  model.validate();
  check_state(model, state);
  const Grid& g = state.u.grid();
  const int n = g.size();
  Transformer& tf = transformer_for(state.u.grid_ptr());
  const double nu = model.nonlinear_coeff();

  // ik with the Nyquist mode dropped (odd derivative has no real
  // representation there).
  std::vector<double> kk(g.k());
  kk[g.nyquist_index()] = 0.0;

  StateDeriv out;
  if (!model.is_system()) {
    std::vector<double> u = state.u.values();
    std::vector<double> usq(n);
    kern::rmul(u.data(), u.data(), usq.data(), n);
    std::vector<cplx> usq_hat(n);
    tf.to_coeffs(usq.data(), usq_hat.data());

    std::vector<double> w = model.linear_phase(g);
    for (int m = 0; m < n; ++m) w[m] = -w[m];
    std::vector<cplx> lin(n);
    kern::cmul_imag(state.u.coeffs().data(), w.data(), lin.data(), n);

    for (int m = 0; m < n; ++m) kk[m] *= -0.5 * nu;
    out.du.resize(n);
    kern::cmul_imag(usq_hat.data(), kk.data(), out.du.data(), n);
    kern::caxpy(out.du.data(), 1.0, lin.data(), out.du.data(), n);
    return out;
  }

  // Boussinesq system.
  const SpectralField& eta = *state.eta;
  std::vector<double> u = state.u.values();
  std::vector<double> w_eta = eta.values();
  std::vector<double> prod(n), usq(n);
  kern::rmul(w_eta.data(), u.data(), prod.data(), n);  // ηu
  kern::rmul(u.data(), u.data(), usq.data(), n);       // u²
  std::vector<cplx> etau_hat(n), usq_hat(n);
  tf.to_coeffs(prod.data(), etau_hat.data());
  tf.to_coeffs(usq.data(), usq_hat.data());

  std::vector<double> M = symbol_on_grid(model.dispersion_symbol(), g);

  // η' = -ik (M û + ε (ηu)^ - c η̂),  u' = -ik (η̂ + ε/2 (u²)^ - c û)
  std::vector<cplx> tmp(n);
  kern::cmul_real(state.u.coeffs().data(), M.data(), tmp.data(), n);
  kern::caxpy(tmp.data(), nu, etau_hat.data(), tmp.data(), n);
  kern::caxpy(tmp.data(), -model.c, eta.coeffs().data(), tmp.data(), n);
  std::vector<double> mkk(n);
  for (int m = 0; m < n; ++m) mkk[m] = -kk[m];
  out.deta.resize(n);
  kern::cmul_imag(tmp.data(), mkk.data(), out.deta.data(), n);

  kern::caxpy(eta.coeffs().data(), 0.5 * nu, usq_hat.data(), tmp.data(), n);
  kern::caxpy(tmp.data(), -model.c, state.u.coeffs().data(), tmp.data(), n);
  out.du.resize(n);
  kern::cmul_imag(tmp.data(), mkk.data(), out.du.data(), n);
  return out;
}

SpectralField linear_group(const ModelSpec& model, const SpectralField& phi,
                           double t) {
  model.validate();
  if (model.is_system())
    throw ContractViolation(
        "linear_group supports the scalar families only (use rhs with zero "
        "nonlinearity for the system)");
  if (model.c != 0.0)
    throw ContractViolation("linear_group expects the lab frame (c = 0)");
  const Grid& g = phi.grid();
  std::vector<double> w = model.linear_phase(g);
  std::vector<cplx> out(g.size());
  for (int m = 0; m < g.size(); ++m) {
    const double phase = -t * w[m];
    out[m] = phi.coeffs()[m] * cplx(std::cos(phase), std::sin(phase));
  }
  return SpectralField(phi.grid_ptr(), std::move(out));
}

Conserved conserved(const ModelSpec& model, const State& state) {
  model.validate();
  check_state(model, state);
  const Grid& g = state.u.grid();
  const int n = g.size();
  const double len = g.length();
  const double h = g.spacing();
  const double nu = model.nonlinear_coeff();
  Conserved out;

  if (!model.is_system()) {
    const cplx* c = state.u.coeffs().data();
    out.mass = len * state.u.coeffs()[0].real();
    out.mass_u = out.mass;
    out.momentum = len * kern::csum_sq(c, n);
    // Quadratic-form energy: the per-mode weight is (ω(k)-ck)/k continued to
    // k = 0, i.e. m(k)-c for the multiplier families.  The cubic term enters
    // with +ν/6, the sign that the flow actually conserves.
    const double denom = (model.scale == TimeScale::tau) ? model.eps : 1.0;
    std::vector<double> w(n);
    for (int m = 0; m < n; ++m) {
      const double k = g.k()[m];
      double weight;
      if (model.family == ModelFamily::kdv)
        weight = 1.0 - 0.5 * model.eps * (1.0 / 3.0 - model.beta) * k * k;
      else
        weight = eval_symbol(model.dispersion_symbol(), k);
      w[m] = (weight - model.c) / denom;
    }
    const double quad = 0.5 * len * kern::csum_sq_weighted(c, w.data(), n);
    std::vector<double> u = state.u.values();
    const double cubic = h * kern::rsum_pow3(u.data(), n);
    out.energy = quad + (nu / 6.0) * cubic;
    return out;
  }

  const SpectralField& eta = *state.eta;
  out.mass = len * eta.coeffs()[0].real();
  out.mass_u = len * state.u.coeffs()[0].real();
  std::vector<double> u = state.u.values();
  std::vector<double> e = eta.values();
  std::vector<double> prod(n);
  kern::rmul(e.data(), u.data(), prod.data(), n);
  out.momentum = h * kern::rsum(prod.data(), n);
  // H = ½∫(u·Mu + η² + ε u²η) dx, commoving correction -c∫ηu.
  std::vector<double> M = symbol_on_grid(model.dispersion_symbol(), g);
  const double quad_u =
      len * kern::csum_sq_weighted(state.u.coeffs().data(), M.data(), n);
  const double quad_eta = len * kern::csum_sq(eta.coeffs().data(), n);
  kern::rmul(prod.data(), u.data(), prod.data(), n);  // u²η
  const double cubic = h * kern::rsum(prod.data(), n);
  out.energy =
      0.5 * (quad_u + quad_eta) + 0.5 * nu * cubic - model.c * out.momentum;
  return out;
}

}  // namespace wlab
