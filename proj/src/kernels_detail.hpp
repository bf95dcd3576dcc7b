#pragma once

// Internal: per-backend kernel tables.  kernels.cpp wires the dispatch.

#include "wlab/kernels.hpp"

namespace wlab::kern::detail {

struct Ops {
  void (*cscale)(const cplx*, double, cplx*, std::size_t);
  void (*cscale_alt)(const cplx*, double, cplx*, std::size_t);
  void (*cmul_real)(const cplx*, const double*, cplx*, std::size_t);
  void (*cmul_imag)(const cplx*, const double*, cplx*, std::size_t);
  void (*caxpy)(const cplx*, double, const cplx*, cplx*, std::size_t);
  void (*clincomb2)(const cplx*, double, const cplx*, double, const cplx*,
                    cplx*, std::size_t);
  void (*czero_below)(cplx*, double, std::size_t);
  void (*rmul)(const double*, const double*, double*, std::size_t);
  void (*raxpy)(const double*, double, const double*, double*, std::size_t);
  double (*rsum)(const double*, std::size_t);
  double (*rsum_pow3)(const double*, std::size_t);
  double (*rdot)(const double*, const double*, std::size_t);
  double (*rmax_abs)(const double*, std::size_t);
  double (*csum_sq)(const cplx*, std::size_t);
  double (*csum_sq_weighted)(const cplx*, const double*, std::size_t);
  double (*cmax_abs)(const cplx*, std::size_t);
  double (*cdiff_norm2)(const cplx*, const cplx*, std::size_t);
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
#define WLAB_HAVE_AVX2_BUILD 1
const Ops& avx2_ops();
#else
#define WLAB_HAVE_AVX2_BUILD 0
#endif

}  // namespace wlab::kern::detail
