#pragma once

#include <vector>

#include "sheathlab/grid.hpp"

namespace sheathlab {

struct PoissonResult {
  std::vector<double> phi;
  std::vector<double> phi_x;  // phi_x[0] is exactly the Neumann datum E0
  int newton_iterations = 0;
  double final_residual = 0.0;  // max |update| at the last iteration
};

// Solve phi_xx = n - exp(-phi) on the grid with phi_x(0) = E0 (ghost-node
// Neumann, second order) and phi(L) = far_value. Damped Newton with a
// tridiagonal Jacobian solve; converges when max |update| < 1e-12.
// `initial_guess` (if non-empty, size N) warm-starts the iteration.
// Throws SolverError(NonConvergence) after 50 iterations.
PoissonResult solve_poisson(const std::vector<double>& n, double E0,
                            const Grid& grid, double far_value = 0.0,
                            const std::vector<double>& initial_guess = {});

}  // namespace sheathlab
