#pragma once

#include <memory>
#include <vector>

namespace wlab {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

// Uniform periodic grid on [-Lπ, Lπ) with N collocation points and the
// matching FFT-ordered wavenumbers (integer multiples of 1/L).
class Grid {
 public:
  // Throws ConfigError unless n is a power of two >= 4 and half_width > 0.
  static GridPtr make(int n, double half_width);

  int size() const { return n_; }
  double half_width() const { return half_width_; }      // L
  double length() const { return length_; }              // 2πL
  double spacing() const { return length_ / n_; }        // Δx
  double kmax() const { return 0.5 * n_ / half_width_; } // N/(2L)

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& k() const { return k_; }
  int nyquist_index() const { return n_ / 2; }

  bool same_as(const Grid& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  Grid(int n, double half_width);

  int n_;
  double half_width_;
  double length_;
  std::vector<double> x_;
  std::vector<double> k_;
};

}  // namespace wlab
