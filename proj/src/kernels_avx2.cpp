// AVX2 kernel variants.  Compiled with -mavx2 (no FMA, so products and sums
// round exactly like the scalar reference).  Only reached after a runtime
// cpuid check in kernels.cpp.

#include "kernels_detail.hpp"

#if WLAB_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cmath>

namespace wlab::kern::detail {
namespace {

inline const double* dview(const cplx* a) {
  return reinterpret_cast<const double*>(a);
}
inline double* dview(cplx* a) { return reinterpret_cast<double*>(a); }

// [m[i], m[i], m[i+1], m[i+1]] for pairing a real multiplier with complex data
inline __m256d dup_pair(const double* m, std::size_t i) {
  const __m128d lo = _mm_loadu_pd(m + i);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(lo), 0x50);
}

void v_cscale(const cplx* a, double s, cplx* z, std::size_t n) {
  const double* ad = dview(a);
  double* zd = dview(z);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(zd + 2 * i, _mm256_mul_pd(sv, _mm256_loadu_pd(ad + 2 * i)));
  for (; i < n; ++i) z[i] = cplx(s * a[i].real(), s * a[i].imag());
}

void v_cscale_alt(const cplx* a, double s, cplx* z, std::size_t n) {
  const double* ad = dview(a);
  double* zd = dview(z);
  const __m256d sv = _mm256_setr_pd(s, s, -s, -s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(zd + 2 * i, _mm256_mul_pd(sv, _mm256_loadu_pd(ad + 2 * i)));
  for (; i < n; ++i) {
    const double f = (i & 1u) ? -s : s;
    z[i] = cplx(f * a[i].real(), f * a[i].imag());
  }
}

void v_cmul_real(const cplx* a, const double* m, cplx* z, std::size_t n) {
  const double* ad = dview(a);
  double* zd = dview(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(zd + 2 * i,
                     _mm256_mul_pd(dup_pair(m, i), _mm256_loadu_pd(ad + 2 * i)));
  for (; i < n; ++i) z[i] = cplx(m[i] * a[i].real(), m[i] * a[i].imag());
}

void v_cmul_imag(const cplx* a, const double* w, cplx* z, std::size_t n) {
  const double* ad = dview(a);
  double* zd = dview(z);
  const __m256d signs = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d swapped = _mm256_permute_pd(av, 0x5);  // [im0,re0,im1,re1]
    const __m256d ws = _mm256_xor_pd(dup_pair(w, i), signs);  // [-w0,w0,-w1,w1]
    _mm256_storeu_pd(zd + 2 * i, _mm256_mul_pd(swapped, ws));
  }
  for (; i < n; ++i) z[i] = cplx(-w[i] * a[i].imag(), w[i] * a[i].real());
}

void v_caxpy(const cplx* a, double s, const cplx* b, cplx* z, std::size_t n) {
  const double* ad = dview(a);
  const double* bd = dview(b);
  double* zd = dview(z);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d r = _mm256_add_pd(
        _mm256_loadu_pd(ad + 2 * i),
        _mm256_mul_pd(sv, _mm256_loadu_pd(bd + 2 * i)));
    _mm256_storeu_pd(zd + 2 * i, r);
  }
  for (; i < n; ++i)
    z[i] = cplx(a[i].real() + s * b[i].real(), a[i].imag() + s * b[i].imag());
}

void v_clincomb2(const cplx* a, double s1, const cplx* b, double s2,
                 const cplx* c, cplx* z, std::size_t n) {
  const double* ad = dview(a);
  const double* bd = dview(b);
  const double* cd = dview(c);
  double* zd = dview(z);
  const __m256d s1v = _mm256_set1_pd(s1);
  const __m256d s2v = _mm256_set1_pd(s2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d r = _mm256_add_pd(
        _mm256_loadu_pd(ad + 2 * i),
        _mm256_mul_pd(s1v, _mm256_loadu_pd(bd + 2 * i)));
    r = _mm256_add_pd(r, _mm256_mul_pd(s2v, _mm256_loadu_pd(cd + 2 * i)));
    _mm256_storeu_pd(zd + 2 * i, r);
  }
  for (; i < n; ++i)
    z[i] = cplx(a[i].real() + s1 * b[i].real() + s2 * c[i].real(),
                a[i].imag() + s1 * b[i].imag() + s2 * c[i].imag());
}

void v_czero_below(cplx* z, double thr, std::size_t n) {
  double* zd = dview(z);
  const double t2 = thr * thr;
  const __m256d t2v = _mm256_set1_pd(t2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(zd + 2 * i);
    const __m256d sq = _mm256_mul_pd(av, av);
    const __m256d m2 = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
    const __m256d below = _mm256_cmp_pd(m2, t2v, _CMP_LT_OQ);
    _mm256_storeu_pd(zd + 2 * i, _mm256_andnot_pd(below, av));
  }
  for (; i < n; ++i) {
    const double m2 = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    if (m2 < t2) z[i] = cplx(0.0, 0.0);
  }
}

void v_rmul(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void v_raxpy(const double* a, double s, const double* b, double* y,
             std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(
        y + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                             _mm256_mul_pd(sv, _mm256_loadu_pd(b + i))));
  for (; i < n; ++i) y[i] = a[i] + s * b[i];
}

// 4-lane Kahan accumulator; lanes combined (and tail folded in) at the end.
struct VAcc {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  inline void add(__m256d v) {
    const __m256d y = _mm256_sub_pd(v, comp);
    const __m256d t = _mm256_add_pd(sum, y);
    comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
    sum = t;
  }
  double total(double tail_sum) const {
    alignas(32) double s[4];
    _mm256_store_pd(s, sum);
    double acc = 0.0, c = 0.0;
    for (double v : {s[0], s[1], s[2], s[3], tail_sum}) {
      const double y = v - c;
      const double t = acc + y;
      c = (t - acc) - y;
      acc = t;
    }
    return acc;
  }
};

double v_rsum(const double* a, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc.add(_mm256_loadu_pd(a + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return acc.total(tail);
}

double v_rsum_pow3(const double* a, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    acc.add(_mm256_mul_pd(_mm256_mul_pd(av, av), av));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * a[i] * a[i];
  return acc.total(tail);
}

double v_rdot(const double* a, const double* b, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return acc.total(tail);
}

double v_rmax_abs(const double* a, std::size_t n) {
  const __m256d absmask = _mm256_set1_pd(-0.0);
  __m256d mv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    mv = _mm256_max_pd(mv, _mm256_andnot_pd(absmask, _mm256_loadu_pd(a + i)));
  alignas(32) double s[4];
  _mm256_store_pd(s, mv);
  double m = std::max(std::max(s[0], s[1]), std::max(s[2], s[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

double v_csum_sq(const cplx* a, std::size_t n) {
  const double* ad = dview(a);
  return v_rdot(ad, ad, 2 * n);
}

double v_csum_sq_weighted(const cplx* a, const double* w, std::size_t n) {
  const double* ad = dview(a);
  VAcc acc;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    acc.add(_mm256_mul_pd(dup_pair(w, i), _mm256_mul_pd(av, av)));
  }
  double tail = 0.0;
  for (; i < n; ++i)
    tail += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return acc.total(tail);
}

double v_cmax_abs(const cplx* a, std::size_t n) {
  const double* ad = dview(a);
  __m256d mv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d sq = _mm256_mul_pd(av, av);
    mv = _mm256_max_pd(mv, _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5)));
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, mv);
  double m2 = std::max(std::max(s[0], s[1]), std::max(s[2], s[3]));
  for (; i < n; ++i)
    m2 = std::max(m2, a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return std::sqrt(m2);
}

double v_cdiff_norm2(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = dview(a);
  const double* bd = dview(b);
  VAcc acc;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(ad + 2 * i), _mm256_loadu_pd(bd + 2 * i));
    acc.add(_mm256_mul_pd(d, d));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double dr = a[i].real() - b[i].real();
    const double di = a[i].imag() - b[i].imag();
    tail += dr * dr + di * di;
  }
  return std::sqrt(acc.total(tail));
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {
      v_cscale,   v_cscale_alt, v_cmul_real, v_cmul_imag,  v_caxpy,
      v_clincomb2, v_czero_below, v_rmul,    v_raxpy,      v_rsum,
      v_rsum_pow3, v_rdot,       v_rmax_abs, v_csum_sq,    v_csum_sq_weighted,
      v_cmax_abs,  v_cdiff_norm2};
  return ops;
}

}  // namespace wlab::kern::detail

#endif  // WLAB_HAVE_AVX2_BUILD
