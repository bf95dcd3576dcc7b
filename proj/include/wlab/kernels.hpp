#pragma once

// Data-parallel kernels for coefficient-space arithmetic.
//
// Every operation has a scalar reference implementation and, on x86-64
// machines with AVX2, a vectorized variant.  The backend is picked once at
// startup (overridable with WLAB_KERNELS=scalar|avx2 or set_backend()).
// Element-wise kernels produce bit-identical results across backends;
// reductions use compensated summation in both and agree to O(eps).

#include <complex>
#include <cstddef>
#include <string>

namespace wlab::kern {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active();
bool backend_supported(Backend b);
void set_backend(Backend b);  // throws std::runtime_error if unsupported
std::string backend_name(Backend b);

// z[i] = s * a[i]
void cscale(const cplx* a, double s, cplx* z, std::size_t n);
// z[i] = (i even ? s : -s) * a[i]   (FFT-order (-1)^m phase fold)
void cscale_alt(const cplx* a, double s, cplx* z, std::size_t n);
// z[i] = m[i] * a[i]                (real multiplier)
void cmul_real(const cplx* a, const double* m, cplx* z, std::size_t n);
// z[i] = (i*w[i]) * a[i]            (imaginary multiplier i*w, w real)
void cmul_imag(const cplx* a, const double* w, cplx* z, std::size_t n);
// z[i] = a[i] + s * b[i]
void caxpy(const cplx* a, double s, const cplx* b, cplx* z, std::size_t n);
// z[i] = a[i] + s1*b[i] + s2*c[i]   (IRK stage combination)
void clincomb2(const cplx* a, double s1, const cplx* b, double s2,
               const cplx* c, cplx* z, std::size_t n);
// zero every entry with |z[i]| < thr (Krasny filter)
void czero_below(cplx* z, double thr, std::size_t n);

// y[i] = a[i] * b[i]                (real pointwise product)
void rmul(const double* a, const double* b, double* y, std::size_t n);
// y[i] = a[i] + s * b[i]
void raxpy(const double* a, double s, const double* b, double* y,
           std::size_t n);

// Reductions (compensated; scalar and SIMD agree to ~1e-15 relative).
double rsum(const double* a, std::size_t n);              // sum a[i]
double rsum_pow3(const double* a, std::size_t n);         // sum a[i]^3
double rdot(const double* a, const double* b, std::size_t n);
double rmax_abs(const double* a, std::size_t n);
double csum_sq(const cplx* a, std::size_t n);             // sum |a[i]|^2
double csum_sq_weighted(const cplx* a, const double* w,
                        std::size_t n);                    // sum w[i]|a[i]|^2
double cmax_abs(const cplx* a, std::size_t n);            // max |a[i]|
double cdiff_norm2(const cplx* a, const cplx* b, std::size_t n);  // ||a-b||_2

}  // namespace wlab::kern
