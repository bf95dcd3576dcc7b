#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wlab/analysis.hpp"
#include "wlab/errors.hpp"

using namespace wlab;

namespace {

// frozen extended-precision root of tanh x = 0.5 x on x > 0
constexpr double TANHC_HALF_ROOT = 1.9150080481545375;

std::vector<double> half_k(const Grid& g) {
  std::vector<double> k(g.size() / 2 + 1);
  for (int m = 0; m <= g.size() / 2; ++m) k[m] = m / g.half_width();
  return k;
}

}  // namespace

TEST_CASE("fit recovers synthetic model spectra to well under 1%") {
  GridPtr g = Grid::make(1 << 12, 5.0);
  std::vector<double> k = half_k(*g);
  for (auto [mu, delta] : {std::pair{0.5, 0.3}, std::pair{-0.55, 0.1},
                           std::pair{2.0, 0.05}}) {
    REQUIRE(delta * g->kmax() > 5.0);
    std::vector<double> a(k.size());
    a[0] = 1.0;
    for (std::size_t i = 1; i < k.size(); ++i)
      a[i] = 2.0 * std::pow(k[i], -(mu + 1.0)) * std::exp(-delta * k[i]);
    SingularityFit fit = fit_spectrum_samples(k, a, std::nullopt, 0.0);
    CHECK(fit.mu == doctest::Approx(mu).epsilon(1e-3));
    CHECK(fit.delta == doctest::Approx(delta).epsilon(1e-3));
    CHECK(fit.amplitude == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(fit.rms_residual < 1e-10);
  }
}

TEST_CASE("fit window default and insufficient-resolution error") {
  GridPtr g = Grid::make(256, 5.0);
  std::vector<double> k = half_k(*g);
  std::vector<double> a(k.size(), 0.0);
  a[0] = 1.0;
  for (int i = 1; i < 10; ++i) a[i] = 1e-3;  // everything else below floor
  CHECK_THROWS_AS(fit_spectrum_samples(k, a, std::nullopt, 0.0), ConfigError);
}

TEST_CASE("sech^2 field: delta equals the pole distance pi/(2a)") {
  GridPtr g = Grid::make(1 << 12, 5.0);
  const double a = 20.0;
  std::vector<double> u(g->size());
  for (int j = 0; j < g->size(); ++j) {
    const double s = 1.0 / std::cosh(a * g->x()[j]);
    u[j] = s * s;
  }
  SingularityFit fit = fit_spectrum(transform(u, g), std::nullopt, 0.0);
  const double pole = std::numbers::pi / (2.0 * a);
  CHECK(fit.delta == doctest::Approx(pole).epsilon(0.02));
  // double pole: u ~ (x - x_s)^{-2}, so μ = -2
  CHECK(fit.mu == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(fit.rms_residual < 0.05);
}

TEST_CASE("gaussian spectrum does not fit the algebraic-exponential form") {
  // narrow gaussian so the spectrum reaches the default window
  GridPtr g = Grid::make(1 << 12, 5.0);
  std::vector<double> u(g->size());
  for (int j = 0; j < g->size(); ++j) {
    const double r = g->x()[j] / 0.1;
    u[j] = std::exp(-r * r);
  }
  SingularityFit fit = fit_spectrum(transform(u, g), std::nullopt, 0.0);
  CHECK(fit.rms_residual > 0.05);  // flagged: no finite-distance singularity
}

TEST_CASE("breakdown detection on a synthetic delta series") {
  GridPtr g = Grid::make(1 << 10, 5.0);
  std::vector<double> k = half_k(*g);
  Trajectory traj;
  traj.model = {ModelFamily::whitham, 1.0, 0.0, 1.0, TimeScale::tau};
  traj.stop_cause = StopCause::completed;
  const double mu = 0.42;
  for (int r = 0; r <= 20; ++r) {
    const double t = 0.01 * r;
    const double delta = 0.11 - 0.5 * t;  // crosses dx ≈ 0.0307 at t ≈ 0.1578
    SpectrumRecord rec;
    rec.t = t;
    std::vector<double> a(k.size());
    a[0] = 1.0;
    for (std::size_t i = 1; i < k.size(); ++i)
      a[i] = 3.0 * std::pow(k[i], -(mu + 1.0)) *
             std::exp(-std::max(delta, 0.0) * k[i]);
    rec.abs_coeffs.push_back(std::move(a));
    traj.spectra.push_back(std::move(rec));
  }
  traj.snapshots.emplace_back(0.2, State::scalar(SpectralField::zero(g)));
  traj.stop_time = 0.2;

  BreakdownReport rep = detect_breakdown(traj, g->spacing());
  CHECK(rep.classification == Breakdown::cusp);
  CHECK(rep.mu_at_critical == doctest::Approx(mu).epsilon(0.01));
  // analytic crossing of δ(t) = 0.11 - t/2 below dx = 2πL/N
  const double cross = (0.11 - g->spacing()) / 0.5;
  CHECK(rep.critical_time == doctest::Approx(cross).epsilon(0.07));
  CHECK(rep.delta_tol == doctest::Approx(g->spacing()));
  // the default tolerance is an eighth of a grid spacing
  CHECK(detect_breakdown(traj).delta_tol ==
        doctest::Approx(g->spacing() / 8.0));

  // no crossing and completed run → none
  Trajectory calm = traj;
  calm.spectra.clear();
  for (int r = 0; r <= 5; ++r) {
    SpectrumRecord rec;
    rec.t = 0.01 * r;
    std::vector<double> a(k.size());
    a[0] = 1.0;
    for (std::size_t i = 1; i < k.size(); ++i)
      a[i] = 3.0 * std::pow(k[i], -(mu + 1.0)) * std::exp(-0.5 * k[i]);
    rec.abs_coeffs.push_back(std::move(a));
    calm.spectra.push_back(std::move(rec));
  }
  CHECK(detect_breakdown(calm).classification == Breakdown::none);

  // early stop without crossing → resolution loss at the stop time
  Trajectory lost = calm;
  lost.stop_cause = StopCause::resolution_loss;
  lost.stop_time = 0.05;
  BreakdownReport rl = detect_breakdown(lost);
  CHECK(rl.classification == Breakdown::resolution_loss);
  CHECK(rl.critical_time == doctest::Approx(0.05));
}

TEST_CASE("symbol expansion check: limit, scale invariance, bound") {
  // k → 0: the ratio tends to the x⁴ coefficient of (tanh x/x)^{1/2}-1+x²/6
  const double limit = 19.0 / 360.0;
  CHECK(symbol_expansion_check(1.0, {1e-2}) ==
        doctest::Approx(limit).epsilon(1e-4));

  // the ratio depends only on √ε·k
  const double r1 = symbol_expansion_check(1.0, {1.0});
  const double r2 = symbol_expansion_check(0.01, {10.0});
  CHECK(std::fabs(r1 - r2) < 1e-12);

  // bound over the whole region, three decades of ε
  std::vector<double> xs;
  for (int i = 1; i <= 2000; ++i) xs.push_back(0.05 + 0.95 * i / 2000.0);
  for (double eps : {1.0, 0.1, 0.01}) {
    std::vector<double> ks;
    for (double x : xs) ks.push_back(x / std::sqrt(eps));
    const double worst = symbol_expansion_check(eps, ks);
    CHECK(worst < 0.1);
    CHECK(worst > 0.0);
  }

  CHECK_THROWS_AS(symbol_expansion_check(1.0, {2.0}), ContractViolation);
  CHECK_THROWS_AS(symbol_expansion_check(1.0, {0.0}), ContractViolation);
}

TEST_CASE("bisection root of tanh x = 0.5 x against the frozen oracle") {
  const double x = tanhc_inverse(0.5);
  CHECK(std::fabs(x - TANHC_HALF_ROOT) < 1e-12);
  CHECK(std::tanh(x) / x == doctest::Approx(0.5).epsilon(1e-12));
  // monotone threshold: x(0.1) > x(0.5) > x(0.9)
  CHECK(tanhc_inverse(0.1) > tanhc_inverse(0.5));
  CHECK(tanhc_inverse(0.5) > tanhc_inverse(0.9));
}

TEST_CASE("stability map of the linearized system") {
  std::vector<double> ks;
  for (int i = 1; i <= 200; ++i) ks.push_back(0.5 * i);

  // cε >= 1: every mode unstable
  StabilityMap all = stability_map(2.0, 1.0, 0.0, ks);
  CHECK(all.all_unstable);
  CHECK(all.x_threshold == 0.0);
  for (char u : all.unstable) CHECK(u == 1);

  // cε = 0.5: threshold at x_{c,ε}, modes beyond x/√ε unstable
  StabilityMap half = stability_map(0.5, 1.0, 0.0, ks);
  CHECK(half.x_threshold == doctest::Approx(TANHC_HALF_ROOT).epsilon(1e-10));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const bool expect = ks[i] > half.x_threshold;  // √ε = 1
    if (std::fabs(ks[i] - half.x_threshold) > 1e-6)
      CHECK(bool(half.unstable[i]) == expect);
  }

  // surface tension bounds the unstable set: large k stable again
  StabilityMap st = stability_map(3.0, 1.0, 1.0, ks);
  CHECK(!st.all_unstable);
  CHECK(st.unstable.back() == 0);
  REQUIRE(st.unstable_band.has_value());
  CHECK(st.unstable_band->second < ks.back());
}

TEST_CASE("whitham-kdv comparison: zero gap at t=0, sane growth") {
  GridPtr g = Grid::make(1 << 10, 5.0);
  std::vector<double> u(g->size());
  for (int j = 0; j < g->size(); ++j)
    u[j] = std::exp(-g->x()[j] * g->x()[j]);
  SpectralField phi = transform(u, g);

  ComparisonResult res = compare_whitham_kdv(phi, 0.1, 0, 0.5, 500, 25);
  REQUIRE(res.complete);
  REQUIRE(!res.series.empty());
  CHECK(res.series.front().hj_diff == 0.0);
  CHECK(res.m_j > 0.0);
  for (const auto& p : res.series) CHECK(p.bound == doctest::Approx(0.01 * p.t));
}
