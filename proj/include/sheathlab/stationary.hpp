#pragma once

#include <array>
#include <string>
#include <vector>

#include "sheathlab/grid.hpp"
#include "sheathlab/model.hpp"

namespace sheathlab {

// Monotone sheath profile sampled on a grid. Arrays hold the stationary
// density, velocity, temperature, potential and field. Invariants (checked
// by the test suite): n*u = u_inf and T*n^(1-gamma) = T_inf to 1e-10,
// phi = f(n) to 1e-10, phi_x^2 = 2 V(phi) to 1e-8, sign(phi_x) = -sign(phi_b),
// and zero net flux n*u + u_e*exp(-phi) = 0 at the wall to 1e-8.
struct StationaryProfile {
  Grid grid;
  std::vector<double> n, u, T, phi, phi_x;
  Regime regime;
  double phi_b = 0.0;
  // Node where the orbit integration hands over to the analytic tail
  // continuation (-1 if the whole domain was integrated). Derivative
  // stencils must not straddle this node: the splice carries a derivative
  // kink of the order of the truncated asymptotic series.
  int tail_start = -1;
};

enum class Existence { Exists, NoSolution, TrivialOnly };

const char* to_string(Existence e);

struct ExistenceReport {
  Existence verdict;
  std::string reason;       // which condition decided the verdict
  Regime regime;
  double phi_b = 0.0;
  double V_phi_b = 0.0;     // pseudo-potential at the wall (NaN if not computable)
  double f_c_inf = 0.0;     // Bernoulli value at the critical density
};

// Existence trichotomy for the stationary problem:
//  - phi_b = 0: only the constant solution (TrivialOnly), any regime;
//  - forbidden window with phi_b != 0: NoSolution;
//  - otherwise Exists iff V(phi_b) >= 0 and phi_b >= f(c_inf).
ExistenceReport existence_check(const PhysicalParams& p);

// Default domain length: nondegenerate profiles decay like exp(-sqrt(V''(0)) x)
// and get L = 30/sqrt(V''(0)); marginal-Bohm profiles decay algebraically and
// get L with (Gamma L + phi_b^{-1/2})^{-2} < 1e-6, capped at 1e4. Other
// regimes (no sheath to resolve) get L = 40.
double default_domain_length(const PhysicalParams& p);

// Integrate the orbit law d(phi)/dx = -sign(phi_b) sqrt(2 V(phi)) from
// phi(0) = phi_b with an adaptive embedded RK pair, then reconstruct
// (n, u, T) from the flow integrals. Throws NonexistenceError when
// existence_check fails, SolverError(NegativeV) if V < -1e-14 on the orbit,
// SolverError(BranchEscape) if the orbit leaves the density branch.
StationaryProfile solve_sheath(const PhysicalParams& p, const Grid& grid);

// Gamma = sqrt(((gamma^2 + gamma) R T_inf + 2) / 12), the constant governing
// the algebraic envelope of the marginal-Bohm profile.
double envelope_gamma(const PhysicalParams& p);

struct DecayRateReport {
  double c_fit = 0.0;        // fitted spatial decay rate (positive)
  double c_predicted = 0.0;  // sqrt(V''(0)) from quadrature differences
  double rel_deviation = 0.0;
  double r_squared = 0.0;
  int nodes_used = 0;
};

// Least-squares fit of log|phi| against x on the window 1e-8 < |phi| <
// |phi_b|/10. Throws SolverError(InsufficientWindow) when fewer than 20
// nodes qualify.
DecayRateReport verify_decay_nondegenerate(const StationaryProfile& prof,
                                           const PhysicalParams& p);

// Algebraic-envelope diagnostics for the marginal-Bohm profile. With
// Gamma = sqrt(((gamma^2+gamma) R T_inf + 2)/12) and G(x) = Gamma x +
// phi_b^{-1/2}, the profile obeys d^i/dx^i U * G^(i+2) -> -c_i for
// U = -phi (and the density variants), where
//   c_0 = 1, c_1 = -2 Gamma, c_2 = 6 Gamma^2, c_3 = -24 Gamma^3.
struct DegenerateEnvelope {
  double Gamma = 0.0;
  std::array<double, 4> c{};            // c_0..c_3
  std::vector<double> G;                // G at the grid nodes
  std::array<double, 4> sup_defects{};  // sup_x |d^i U G^(i+2) + c_i| for U = -phi
  // Same defects for all tracked fields:
  // rows: -phi, n-1, log n, u/u_inf - 1, (T/T_inf - 1)/gamma.
  std::array<std::string, 5> field_names;
  std::array<std::array<double, 4>, 5> defects_all{};
};

DegenerateEnvelope verify_decay_degenerate(const StationaryProfile& prof,
                                           const PhysicalParams& p);

struct ProfileSample {
  double n, u, T, phi, phi_x;
};

// Cubic (4-point Lagrange) interpolation of the profile; exact at nodes.
// Throws std::out_of_range outside [0, L].
ProfileSample sample_profile(const StationaryProfile& prof, double x);

}  // namespace sheathlab
