// Scalar reference kernels.  These define the semantics the SIMD variants
// must reproduce: element-wise ops bit-exactly, reductions to rounding noise.

#include <cmath>

#include "kernels_detail.hpp"

namespace wlab::kern::detail {
namespace {

void s_cscale(const cplx* a, double s, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = cplx(s * a[i].real(), s * a[i].imag());
}

void s_cscale_alt(const cplx* a, double s, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double f = (i & 1u) ? -s : s;
    z[i] = cplx(f * a[i].real(), f * a[i].imag());
  }
}

void s_cmul_real(const cplx* a, const double* m, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = cplx(m[i] * a[i].real(), m[i] * a[i].imag());
}

void s_cmul_imag(const cplx* a, const double* w, cplx* z, std::size_t n) {
  // (re,im) * i*w = (-w*im, w*re)
  for (std::size_t i = 0; i < n; ++i)
    z[i] = cplx(-w[i] * a[i].imag(), w[i] * a[i].real());
}

void s_caxpy(const cplx* a, double s, const cplx* b, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    z[i] = cplx(a[i].real() + s * b[i].real(), a[i].imag() + s * b[i].imag());
}

void s_clincomb2(const cplx* a, double s1, const cplx* b, double s2,
                 const cplx* c, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    z[i] = cplx(a[i].real() + s1 * b[i].real() + s2 * c[i].real(),
                a[i].imag() + s1 * b[i].imag() + s2 * c[i].imag());
}

void s_czero_below(cplx* z, double thr, std::size_t n) {
  const double t2 = thr * thr;
  for (std::size_t i = 0; i < n; ++i) {
    const double m2 = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    if (m2 < t2) z[i] = cplx(0.0, 0.0);
  }
}

void s_rmul(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

void s_raxpy(const double* a, double s, const double* b, double* y,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] + s * b[i];
}

// Kahan-compensated accumulator; keeps reductions at O(eps) regardless of n.
struct Acc {
  double sum = 0.0, comp = 0.0;
  inline void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

double s_rsum(const double* a, std::size_t n) {
  Acc acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i]);
  return acc.sum;
}

double s_rsum_pow3(const double* a, std::size_t n) {
  Acc acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * a[i] * a[i]);
  return acc.sum;
}

double s_rdot(const double* a, const double* b, std::size_t n) {
  Acc acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.sum;
}

double s_rmax_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

double s_csum_sq(const cplx* a, std::size_t n) {
  Acc acc;
  for (std::size_t i = 0; i < n; ++i)
    acc.add(a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return acc.sum;
}

double s_csum_sq_weighted(const cplx* a, const double* w, std::size_t n) {
  Acc acc;
  for (std::size_t i = 0; i < n; ++i)
    acc.add(w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag()));
  return acc.sum;
}

double s_cmax_abs(const cplx* a, std::size_t n) {
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m2 = std::max(m2, a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return std::sqrt(m2);
}

double s_cdiff_norm2(const cplx* a, const cplx* b, std::size_t n) {
  Acc acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = a[i].real() - b[i].real();
    const double di = a[i].imag() - b[i].imag();
    acc.add(dr * dr + di * di);
  }
  return std::sqrt(acc.sum);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      s_cscale,   s_cscale_alt, s_cmul_real, s_cmul_imag,  s_caxpy,
      s_clincomb2, s_czero_below, s_rmul,    s_raxpy,      s_rsum,
      s_rsum_pow3, s_rdot,       s_rmax_abs, s_csum_sq,    s_csum_sq_weighted,
      s_cmax_abs,  s_cdiff_norm2};
  return ops;
}

}  // namespace wlab::kern::detail
