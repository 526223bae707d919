#pragma once

#include <stdexcept>

namespace sheathlab {

// Uniform grid on [0, L] with N nodes, x_j = j*L/(N-1).
struct Grid {
  double L = 40.0;
  int N = 2048;

  double dx() const { return L / (N - 1); }
  double node(int j) const { return (L * j) / (N - 1); }

  void validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("grid: L must be > 0");
    if (N < 16) throw std::invalid_argument("grid: N must be >= 16");
  }

  bool operator==(const Grid&) const = default;
};

}  // namespace sheathlab
