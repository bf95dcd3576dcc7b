#include "wlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "wlab/errors.hpp"
#include "wlab/kernels.hpp"

namespace wlab {

namespace {
// FFTW's planner is not thread-safe; plan creation is serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralField::SpectralField(GridPtr grid, std::vector<cplx> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != grid_->size())
    throw ContractViolation("coefficient count does not match grid size");
}

SpectralField SpectralField::zero(GridPtr grid) {
  std::vector<cplx> c(grid->size(), cplx(0.0, 0.0));
  return SpectralField(std::move(grid), std::move(c));
}

std::vector<double> SpectralField::values() const {
  return inverse_transform(*this);
}

double SpectralField::conjugate_symmetry_gap() const {
  const int n = grid_->size();
  double gap = 0.0;
  for (int m = 1; m < n; ++m) {
    const cplx d = coeffs_[m] - std::conj(coeffs_[n - m]);
    gap = std::max(gap, std::abs(d));
  }
  gap = std::max(gap, std::fabs(coeffs_[0].imag()));
  const double scale = kern::cmax_abs(coeffs_.data(), coeffs_.size());
  return scale > 0.0 ? gap / scale : gap;
}

Transformer::Transformer(GridPtr grid) : grid_(std::move(grid)) {
  const int n = grid_->size();
  buf_in_ = reinterpret_cast<cplx*>(fftw_alloc_complex(n));
  buf_out_ = reinterpret_cast<cplx*>(fftw_alloc_complex(n));
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps planning deterministic run to run.
  fwd_plan_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_in_),
                               reinterpret_cast<fftw_complex*>(buf_out_),
                               FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_plan_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_in_),
                               reinterpret_cast<fftw_complex*>(buf_out_),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
}

Transformer::~Transformer() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_plan_));
  fftw_free(buf_in_);
  fftw_free(buf_out_);
}

// The grid origin sits at x = -Lπ, so the coefficients of the e^{ikx} basis
// pick up a (-1)^m phase relative to the raw index-space DFT; both directions
// fold it in together with the 1/N mean normalization.
void Transformer::to_coeffs(const double* values, cplx* coeffs) {
  const int n = grid_->size();
  for (int j = 0; j < n; ++j) buf_in_[j] = cplx(values[j], 0.0);
  fftw_execute(static_cast<fftw_plan>(fwd_plan_));
  kern::cscale_alt(buf_out_, 1.0 / n, coeffs, n);
}

void Transformer::to_values(const cplx* coeffs, double* values) {
  const int n = grid_->size();
  kern::cscale_alt(coeffs, 1.0, buf_in_, n);
  fftw_execute(static_cast<fftw_plan>(bwd_plan_));
  for (int j = 0; j < n; ++j) values[j] = buf_out_[j].real();
}

void Transformer::to_values_full(const cplx* coeffs, cplx* values) {
  const int n = grid_->size();
  kern::cscale_alt(coeffs, 1.0, buf_in_, n);
  fftw_execute(static_cast<fftw_plan>(bwd_plan_));
  for (int j = 0; j < n; ++j) values[j] = buf_out_[j];
}

Transformer& transformer_for(const GridPtr& grid) {
  static std::mutex registry_mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<Transformer>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto key = std::make_pair(grid->size(), grid->half_width());
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::make_unique<Transformer>(grid)).first;
  return *it->second;
}

SpectralField transform(std::span<const double> values, GridPtr grid) {
  if (static_cast<int>(values.size()) != grid->size())
    throw ContractViolation("value count does not match grid size");
  std::vector<cplx> coeffs(grid->size());
  transformer_for(grid).to_coeffs(values.data(), coeffs.data());
  return SpectralField(std::move(grid), std::move(coeffs));
}

std::vector<double> inverse_transform(const SpectralField& field) {
  std::vector<double> values(field.grid().size());
  transformer_for(field.grid_ptr()).to_values(field.coeffs().data(),
                                              values.data());
  return values;
}

SpectralField apply_multiplier(const SpectralField& field,
                               const SymbolSpec& spec, int order) {
  if (order != 0 && order != 1)
    throw ContractViolation("derivative order must be 0 or 1");
  const Grid& g = field.grid();
  const int n = g.size();
  std::vector<double> m = symbol_on_grid(spec, g);
  std::vector<cplx> out(n);
  if (order == 0) {
    kern::cmul_real(field.coeffs().data(), m.data(), out.data(), n);
  } else {
    for (int i = 0; i < n; ++i) m[i] *= g.k()[i];
    m[g.nyquist_index()] = 0.0;
    kern::cmul_imag(field.coeffs().data(), m.data(), out.data(), n);
  }
  return SpectralField(field.grid_ptr(), std::move(out));
}

SpectralField krasny_filter(const SpectralField& field, double threshold) {
  if (!(threshold > 0.0))
    throw ContractViolation("Krasny threshold must be positive");
  std::vector<cplx> out = field.coeffs();
  kern::czero_below(out.data(), threshold, out.size());
  return SpectralField(field.grid_ptr(), std::move(out));
}

NormSet norms(const SpectralField& field, int j) {
  if (j < 0) throw ContractViolation("Sobolev index must be nonnegative");
  const Grid& g = field.grid();
  const int n = g.size();
  const double len = g.length();
  const cplx* c = field.coeffs().data();

  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = g.k()[i] * g.k()[i];
  const double dx2 = len * kern::csum_sq_weighted(c, w.data(), n);
  for (int i = 0; i < n; ++i) w[i] = std::pow(1.0 + w[i], j);
  const double hj2 = len * kern::csum_sq_weighted(c, w.data(), n);

  std::vector<double> u = field.values();
  NormSet out;
  out.mass = len * field.coeffs()[0].real();
  out.l2 = std::sqrt(len * kern::csum_sq(c, n));
  out.linf = kern::rmax_abs(u.data(), n);
  out.hj = std::sqrt(hj2);
  out.dx_l2 = std::sqrt(dx2);
  out.cubic = g.spacing() * kern::rsum_pow3(u.data(), n);
  return out;
}

SpectralField translate_field(const SpectralField& field, double x0) {
  const Grid& g = field.grid();
  const int n = g.size();
  std::vector<cplx> out(n);
  for (int m = 0; m < n; ++m) {
    const double phi = -g.k()[m] * x0;
    out[m] = field.coeffs()[m] * cplx(std::cos(phi), std::sin(phi));
  }
  return SpectralField(field.grid_ptr(), std::move(out));
}

}  // namespace wlab
