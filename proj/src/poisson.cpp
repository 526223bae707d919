#include "sheathlab/poisson.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheathlab/detail/numerics.hpp"
#include "sheathlab/errors.hpp"

namespace sheathlab {

// Discretization: centered phi_xx everywhere; the Neumann condition enters
// node 0 through ghost-node elimination, phi[-1] = phi[1] - 2 dx E0, so the
// node-0 equation reads (2 phi1 - 2 phi0)/dx^2 - 2 E0/dx = n0 - e^{-phi0}.
// The far node is a Dirichlet unknown held at far_value. Newton updates are
// capped at max-norm 2 per sweep: e^{-phi} must not overflow on the way in.
PoissonResult solve_poisson(const std::vector<double>& n, double E0,
                            const Grid& grid, double far_value,
                            const std::vector<double>& initial_guess) {
  grid.validate();
  const int N = grid.N;
  if (static_cast<int>(n.size()) != N) {
    throw std::invalid_argument("solve_poisson: density array has " +
                                std::to_string(n.size()) + " nodes, grid " +
                                std::to_string(N));
  }
  for (double v : n) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("solve_poisson: density must be positive");
    }
  }
  const double dx = grid.dx();
  const double dx2 = dx * dx;

  PoissonResult res;
  if (static_cast<int>(initial_guess.size()) == N) {
    res.phi = initial_guess;
  } else {
    res.phi.assign(N, 0.0);
  }
  res.phi[N - 1] = far_value;
  std::vector<double>& phi = res.phi;

  const int M = N - 1;  // unknowns phi[0..N-2]
  std::vector<double> lo(M), di(M), up(M), rhs(M);
  bool converged = false;
  for (int it = 1; it <= 50; ++it) {
    for (int j = 0; j < M; ++j) {
      const double lap =
          j == 0 ? (2.0 * phi[1] - 2.0 * phi[0]) / dx2 - 2.0 * E0 / dx
                 : (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / dx2;
      rhs[j] = -(lap - n[j] + std::exp(-phi[j]));
      di[j] = -2.0 / dx2 - std::exp(-phi[j]);
      lo[j] = 1.0 / dx2;
      up[j] = j == 0 ? 2.0 / dx2 : 1.0 / dx2;
    }
    detail::solve_tridiagonal(lo, di, up, rhs);
    double step = 0.0;
    for (int j = 0; j < M; ++j) step = std::max(step, std::abs(rhs[j]));
    if (!std::isfinite(step)) {
      throw SolverError(SolverError::Kind::NonConvergence,
                        "potential solve diverged (non-finite update)");
    }
    const double damp = step > 2.0 ? 2.0 / step : 1.0;
    for (int j = 0; j < M; ++j) phi[j] += damp * rhs[j];
    res.newton_iterations = it;
    res.final_residual = step;
    if (damp == 1.0 && step < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SolverError(SolverError::Kind::NonConvergence,
                      "potential solve: 50 Newton iterations, last update " +
                          std::to_string(res.final_residual));
  }

  res.phi_x.assign(N, 0.0);
  res.phi_x[0] = E0;  // the Neumann datum is the boundary field by definition
  for (int j = 1; j + 1 < N; ++j) {
    res.phi_x[j] = (phi[j + 1] - phi[j - 1]) / (2.0 * dx);
  }
  res.phi_x[N - 1] =
      (3.0 * phi[N - 1] - 4.0 * phi[N - 2] + phi[N - 3]) / (2.0 * dx);
  return res;
}

}  // namespace sheathlab
