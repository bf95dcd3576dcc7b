#include "wlab/symbols.hpp"

#include <cmath>

namespace wlab {

bool is_phase_kind(SymbolKind kind) {
  return kind == SymbolKind::kdv_cubic || kind == SymbolKind::airy_phase;
}

namespace {

// tanh(x)/x with the analytic limit at x = 0.
inline double tanhc(double x) {
  if (x == 0.0) return 1.0;
  return std::tanh(x) / x;
}

}  // namespace

double eval_symbol(const SymbolSpec& spec, double k) {
  const double se = std::sqrt(spec.eps);
  switch (spec.kind) {
    case SymbolKind::whitham:
      return std::sqrt(tanhc(se * std::fabs(k)));
    case SymbolKind::whitham_st:
      return std::sqrt((1.0 + spec.beta * spec.eps * k * k) *
                       tanhc(se * std::fabs(k)));
    case SymbolKind::boussinesq_t2:
      return tanhc(se * std::fabs(k));
    case SymbolKind::boussinesq_p:
      return (1.0 + spec.beta * spec.eps * k * k) * tanhc(se * std::fabs(k));
    case SymbolKind::kdv_cubic:
    case SymbolKind::airy_phase:
      return k - (spec.eps / 6.0) * k * k * k;
    case SymbolKind::identity:
      return 1.0;
  }
  return 1.0;
}

std::vector<double> symbol_on_grid(const SymbolSpec& spec, const Grid& grid) {
  std::vector<double> out(grid.size());
  for (int m = 0; m < grid.size(); ++m) out[m] = eval_symbol(spec, grid.k()[m]);
  return out;
}

}  // namespace wlab
