#include "wlab/grid.hpp"

#include <cmath>
#include <numbers>

#include "wlab/errors.hpp"

namespace wlab {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

GridPtr Grid::make(int n, double half_width) {
  if (n < 4 || !power_of_two(n))
    throw ConfigError("grid size must be a power of two >= 4, got " +
                      std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid half-width L must be positive");
  return GridPtr(new Grid(n, half_width));
}

Grid::Grid(int n, double half_width)
    : n_(n),
      half_width_(half_width),
      length_(2.0 * std::numbers::pi * half_width),
      x_(n),
      k_(n) {
  const double pi = std::numbers::pi;
  for (int j = 0; j < n_; ++j)
    x_[j] = -half_width_ * pi + length_ * j / n_;
  for (int m = 0; m < n_; ++m) {
    const int signed_m = (m < n_ / 2) ? m : m - n_;
    k_[m] = signed_m / half_width_;
  }
  // FFT convention: the Nyquist mode carries the negative wavenumber -N/(2L).
}

}  // namespace wlab
