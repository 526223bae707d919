#pragma once

#include <vector>

#include "sheathlab/grid.hpp"

namespace sheathlab {

// Fluid unknowns in log-density form. Using v = log n keeps n = e^v positive
// by construction; T must stay positive (checked where it can be violated).
struct FluidState {
  double t = 0.0;
  std::vector<double> v, u, T;
  Grid grid;
};

}  // namespace sheathlab
