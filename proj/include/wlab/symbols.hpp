#pragma once

#include <vector>

#include "wlab/grid.hpp"

namespace wlab {

// Fourier multipliers and phase functions of the supported dispersion laws.
//
// Multiplier kinds are even in k and multiply (ik)^order in apply_multiplier;
// kdv_cubic / airy_phase are the odd phase functions w(k) = k - (ε/6)k³ used
// by the exact linear groups (the spec's evenness property applies to the
// multiplier kinds only).
enum class SymbolKind {
  whitham,        // l(√εk) = (tanh(√ε|k|)/(√ε|k|))^{1/2}
  whitham_st,     // (1+βεk²)^{1/2} · l(√εk)
  boussinesq_t2,  // l(√εk)² = tanh(√ε|k|)/(√ε|k|)
  boussinesq_p,   // (1+βεk²) · tanh(√ε|k|)/(√ε|k|)
  kdv_cubic,      // k - (ε/6)k³  (phase)
  airy_phase,     // same as kdv_cubic
  identity,
};

struct SymbolSpec {
  SymbolKind kind = SymbolKind::identity;
  double eps = 1.0;
  double beta = 0.0;
};

bool is_phase_kind(SymbolKind kind);

// Finite for every k: the k = 0 values are the analytic limits (1 for the
// multiplier kinds, 0 for the phases); no epsilon-fudge division.
double eval_symbol(const SymbolSpec& spec, double k);

std::vector<double> symbol_on_grid(const SymbolSpec& spec, const Grid& grid);

}  // namespace wlab
