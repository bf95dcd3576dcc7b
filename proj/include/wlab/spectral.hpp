#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wlab/grid.hpp"
#include "wlab/symbols.hpp"

namespace wlab {

using cplx = std::complex<double>;

// A real periodic field stored through its complex Fourier coefficients in
// FFT order, normalized so that coeff(0) is the field mean (coefficients of
// the e^{ikx} basis with x the physical coordinate).
class SpectralField {
 public:
  SpectralField(GridPtr grid, std::vector<cplx> coeffs);
  static SpectralField zero(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  // Physical samples (real part of the inverse transform).
  std::vector<double> values() const;

  // Max deviation from conjugate symmetry, relative to the largest modulus.
  double conjugate_symmetry_gap() const;

 private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
};

// FFT engine bound to one grid (FFTW behind the scenes, plans cached per N).
// Forward fills true Fourier coefficients of the e^{ikx} basis; inverse takes
// them back to collocation values.
class Transformer {
 public:
  explicit Transformer(GridPtr grid);
  ~Transformer();
  Transformer(const Transformer&) = delete;
  Transformer& operator=(const Transformer&) = delete;

  const GridPtr& grid() const { return grid_; }

  void to_coeffs(const double* values, cplx* coeffs);
  void to_values(const cplx* coeffs, double* values);  // real part
  // Inverse transform keeping the imaginary part (reality diagnostics).
  void to_values_full(const cplx* coeffs, cplx* values);

 private:
  GridPtr grid_;
  void* fwd_plan_;
  void* bwd_plan_;
  cplx* buf_in_;
  cplx* buf_out_;
};

// Shared per-grid transformer (serialized internally; fine for the
// single-threaded paths, workers should own a Transformer each).
Transformer& transformer_for(const GridPtr& grid);

SpectralField transform(std::span<const double> values, GridPtr grid);
std::vector<double> inverse_transform(const SpectralField& field);

// coeff_out(k) = m(k) · (ik)^order · coeff_in(k), order in {0, 1}.
// The Nyquist mode is dropped from odd derivatives (no real representation).
SpectralField apply_multiplier(const SpectralField& field,
                               const SymbolSpec& spec, int order);

// Zero every coefficient with modulus < threshold.
SpectralField krasny_filter(const SpectralField& field, double threshold);

struct NormSet {
  double mass;   // ∫ u dx
  double l2;     // ||u||_2
  double linf;   // ||u||_inf
  double hj;     // ||u||_{H^j}
  double dx_l2;  // ||u_x||_2
  double cubic;  // ∫ u³ dx
};
NormSet norms(const SpectralField& field, int j);

// Shift right by x0 (exact up to periodicity): coeff(k) *= e^{-ik x0}.
SpectralField translate_field(const SpectralField& field, double x0);

}  // namespace wlab
