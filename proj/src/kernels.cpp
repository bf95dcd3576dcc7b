// Backend selection and dispatch.

#include "wlab/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_detail.hpp"

namespace wlab::kern {

namespace {

using detail::Ops;

bool cpu_has_avx2() {
#if WLAB_HAVE_AVX2_BUILD
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("WLAB_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

const Ops* g_ops = nullptr;
Backend g_backend = Backend::scalar;

const Ops& ops_for(Backend b) {
#if WLAB_HAVE_AVX2_BUILD
  if (b == Backend::avx2) return detail::avx2_ops();
#endif
  return detail::scalar_ops();
}

const Ops& ops() {
  if (!g_ops) {
    g_backend = detect_backend();
    g_ops = &ops_for(g_backend);
  }
  return *g_ops;
}

}  // namespace

Backend active() {
  ops();
  return g_backend;
}

bool backend_supported(Backend b) {
  if (b == Backend::scalar) return true;
  return cpu_has_avx2();
}

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::runtime_error("kernel backend not supported on this CPU: " +
                             backend_name(b));
  g_backend = b;
  g_ops = &ops_for(b);
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void cscale(const cplx* a, double s, cplx* z, std::size_t n) {
  ops().cscale(a, s, z, n);
}
void cscale_alt(const cplx* a, double s, cplx* z, std::size_t n) {
  ops().cscale_alt(a, s, z, n);
}
void cmul_real(const cplx* a, const double* m, cplx* z, std::size_t n) {
  ops().cmul_real(a, m, z, n);
}
void cmul_imag(const cplx* a, const double* w, cplx* z, std::size_t n) {
  ops().cmul_imag(a, w, z, n);
}
void caxpy(const cplx* a, double s, const cplx* b, cplx* z, std::size_t n) {
  ops().caxpy(a, s, b, z, n);
}
void clincomb2(const cplx* a, double s1, const cplx* b, double s2,
               const cplx* c, cplx* z, std::size_t n) {
  ops().clincomb2(a, s1, b, s2, c, z, n);
}
void czero_below(cplx* z, double thr, std::size_t n) {
  ops().czero_below(z, thr, n);
}
void rmul(const double* a, const double* b, double* y, std::size_t n) {
  ops().rmul(a, b, y, n);
}
void raxpy(const double* a, double s, const double* b, double* y,
           std::size_t n) {
  ops().raxpy(a, s, b, y, n);
}
double rsum(const double* a, std::size_t n) { return ops().rsum(a, n); }
double rsum_pow3(const double* a, std::size_t n) {
  return ops().rsum_pow3(a, n);
}
double rdot(const double* a, const double* b, std::size_t n) {
  return ops().rdot(a, b, n);
}
double rmax_abs(const double* a, std::size_t n) { return ops().rmax_abs(a, n); }
double csum_sq(const cplx* a, std::size_t n) { return ops().csum_sq(a, n); }
double csum_sq_weighted(const cplx* a, const double* w, std::size_t n) {
  return ops().csum_sq_weighted(a, w, n);
}
double cmax_abs(const cplx* a, std::size_t n) { return ops().cmax_abs(a, n); }
double cdiff_norm2(const cplx* a, const cplx* b, std::size_t n) {
  return ops().cdiff_norm2(a, b, n);
}

}  // namespace wlab::kern
