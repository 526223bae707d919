#include "sheathlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sheathlab/detail/numerics.hpp"
#include "sheathlab/errors.hpp"

namespace sheathlab {

namespace {

constexpr double kVClampFloor = -1e-14;  // round-off band where V is zeroed
constexpr double kTailSwitch = 1e-6;     // |phi| below which the tail is analytic

// Orbit speed |d phi / dx| = sqrt(2 V(phi)). V is clamped to 0 inside the
// round-off band and a genuinely negative V aborts: the orbit has left the
// admissible region, which existence_check should have excluded.
double orbit_speed(double phi, const PhysicalParams& p) {
  double V;
  try {
    V = sagdeev_V(phi, p);
  } catch (const std::out_of_range&) {
    throw SolverError(SolverError::Kind::BranchEscape,
                      "orbit left the Bernoulli branch at phi = " +
                          std::to_string(phi));
  }
  if (V < kVClampFloor) {
    throw SolverError(SolverError::Kind::NegativeV,
                      "Sagdeev potential " + std::to_string(V) +
                          " < 0 on the orbit at phi = " + std::to_string(phi));
  }
  return std::sqrt(2.0 * std::max(V, 0.0));
}

// Adaptive Cash-Karp integration of d phi/dx = -sgn * speed(phi) from
// (x, phi) to x_target. Mixed error test err <= atol + rtol |phi|: pure
// relative control stalls once phi approaches the analytic-tail threshold.
double integrate_to(double x, double x_target, double phi, double sgn,
                    double atol, const PhysicalParams& p, double& h_hint) {
  const double rtol = 1e-12;
  auto F = [&](double y) {
    if (sgn * y <= 0.0) return 0.0;  // orbit ended; guards trial overshoot
    return -sgn * orbit_speed(y, p);
  };
  double h = h_hint;
  while (x < x_target) {
    h = std::min(h, x_target - x);
    double phi5, err;
    detail::rk45_step(F, phi, h, phi5, err);
    const double tol = atol + rtol * std::abs(phi);
    if (err <= tol) {
      x += h;
      phi = phi5;
      h *= std::min(5.0, 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.25));
    }
    if (h < 1e-14 * std::max(1.0, x)) {
      throw SolverError(SolverError::Kind::NonConvergence,
                        "orbit step size collapsed near x = " +
                            std::to_string(x));
    }
  }
  h_hint = h;
  return phi;
}

}  // namespace

const char* to_string(Existence e) {
  switch (e) {
    case Existence::Exists: return "Exists";
    case Existence::NoSolution: return "NoSolution";
    case Existence::TrivialOnly: return "TrivialOnly";
  }
  return "?";
}

double envelope_gamma(const PhysicalParams& p) {
  return std::sqrt(
      ((p.gamma * p.gamma + p.gamma) * p.R * p.T_inf + 2.0) / 12.0);
}

ExistenceReport existence_check(const PhysicalParams& p) {
  ExistenceReport rep;
  rep.regime = classify(p);
  rep.phi_b = rep.regime.phi_b;
  rep.f_c_inf = bernoulli_f(rep.regime.c_inf, p);
  rep.V_phi_b = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(rep.phi_b) < 1e-14) {
    rep.verdict = Existence::TrivialOnly;
    rep.reason = "phi_b = 0: the constant state is the unique solution";
    return rep;
  }
  if (rep.regime.tag == RegimeTag::ForbiddenWindow) {
    rep.verdict = Existence::NoSolution;
    rep.reason =
        "supersonic but sub-Bohm inflow admits no solution for phi_b != 0";
    return rep;
  }
  if (rep.phi_b < rep.f_c_inf) {
    rep.verdict = Existence::NoSolution;
    rep.reason = "phi_b below the Bernoulli fold value f(c_inf)";
    return rep;
  }
  rep.V_phi_b = sagdeev_V(rep.phi_b, p);
  if (rep.V_phi_b < 0.0) {
    rep.verdict = Existence::NoSolution;
    rep.reason = "Sagdeev potential negative at the wall";
    return rep;
  }
  rep.verdict = Existence::Exists;
  rep.reason = "V(phi_b) >= 0 and phi_b >= f(c_inf)";
  return rep;
}

double default_domain_length(const PhysicalParams& p) {
  const Regime r = classify(p);
  if (r.tag == RegimeTag::Nondegenerate) {
    const double V2 = sagdeev_V2_at_zero(p);
    if (V2 > 0.0) return 30.0 / std::sqrt(V2);
  } else if (r.tag == RegimeTag::Degenerate && r.phi_b > 0.0) {
    // Tail (Gamma x + phi_b^{-1/2})^{-2} drops below 1e-6 at G = 1e3.
    const double L =
        (1e3 - 1.0 / std::sqrt(r.phi_b)) / envelope_gamma(p);
    return std::clamp(L, 40.0, 1e4);
  }
  return 40.0;
}

StationaryProfile solve_sheath(const PhysicalParams& p, const Grid& grid) {
  grid.validate();
  const ExistenceReport rep = existence_check(p);
  if (rep.verdict == Existence::NoSolution) {
    throw NonexistenceError("no stationary solution: " + rep.reason);
  }

  StationaryProfile prof;
  prof.grid = grid;
  prof.regime = rep.regime;
  prof.phi_b = rep.phi_b;
  const int N = grid.N;
  prof.n.assign(N, 1.0);
  prof.u.assign(N, p.u_inf);
  prof.T.assign(N, p.T_inf);
  prof.phi.assign(N, 0.0);
  prof.phi_x.assign(N, 0.0);
  if (rep.verdict == Existence::TrivialOnly) return prof;

  const double sgn = rep.phi_b > 0.0 ? 1.0 : -1.0;
  const bool degenerate = rep.regime.tag == RegimeTag::Degenerate;
  const double atol = 1e-12 * std::max(std::abs(rep.phi_b), 1e-8);

  // Linearized decay rate for the exponential tail continuation. Only needed
  // when the orbit reaches |phi| < kTailSwitch in a nondegenerate regime.
  double tail_rate = 0.0;
  if (!degenerate) {
    const double V2 = sagdeev_V2_at_zero(p);
    tail_rate = V2 > 0.0 ? std::sqrt(V2) : 0.0;
  }
  const double Gamma = degenerate ? envelope_gamma(p) : 0.0;

  prof.phi[0] = rep.phi_b;
  double h_hint = grid.dx();
  int j_switch = -1;  // first node handled by the analytic tail
  for (int j = 1; j < N; ++j) {
    if (std::abs(prof.phi[j - 1]) < kTailSwitch) {
      j_switch = j - 1;
      break;
    }
    prof.phi[j] = integrate_to(grid.node(j - 1), grid.node(j),
                               prof.phi[j - 1], sgn, atol, p, h_hint);
  }
  prof.tail_start = j_switch;
  for (int j = 0; j < N; ++j) {
    if (j_switch >= 0 && j > j_switch) {
      const double dxs = grid.node(j) - grid.node(j_switch);
      const double phi_s = prof.phi[j_switch];
      if (degenerate) {
        const double G = Gamma * dxs + 1.0 / std::sqrt(phi_s);
        prof.phi[j] = 1.0 / (G * G);
        prof.phi_x[j] = -2.0 * Gamma / (G * G * G);
      } else {
        prof.phi[j] = phi_s * std::exp(-tail_rate * dxs);
        prof.phi_x[j] = -tail_rate * prof.phi[j];
      }
    } else {
      prof.phi_x[j] = -sgn * orbit_speed(prof.phi[j], p);
    }
    const double delta = bernoulli_inverse_delta(prof.phi[j], p);
    prof.n[j] = 1.0 + delta;
    prof.u[j] = p.u_inf / prof.n[j];
    prof.T[j] = p.T_inf * std::exp((p.gamma - 1.0) * std::log1p(delta));
  }
  return prof;
}

DecayRateReport verify_decay_nondegenerate(const StationaryProfile& prof,
                                           const PhysicalParams& p) {
  const double lo = 1e-8;
  const double hi = std::abs(prof.phi_b) / 10.0;
  std::vector<double> xs, logs;
  for (int j = 0; j < prof.grid.N; ++j) {
    const double a = std::abs(prof.phi[j]);
    if (a > lo && a < hi) {
      xs.push_back(prof.grid.node(j));
      logs.push_back(std::log(a));
    }
  }
  if (xs.size() < 20) {
    throw SolverError(SolverError::Kind::InsufficientWindow,
                      "decay fit window has " + std::to_string(xs.size()) +
                          " nodes, need 20");
  }
  const detail::LineFit fit = detail::fit_line(xs, logs);
  DecayRateReport rep;
  rep.c_fit = -fit.slope;
  rep.c_predicted = std::sqrt(sagdeev_V2_at_zero(p));
  rep.rel_deviation =
      std::abs(rep.c_fit - rep.c_predicted) / rep.c_predicted;
  rep.r_squared = fit.r_squared;
  rep.nodes_used = static_cast<int>(xs.size());
  return rep;
}

DegenerateEnvelope verify_decay_degenerate(const StationaryProfile& prof,
                                           const PhysicalParams& p) {
  if (prof.regime.tag != RegimeTag::Degenerate || !(prof.phi_b > 0.0) ||
      prof.phi_b > 0.05) {
    throw std::invalid_argument(
        "degenerate envelope needs the marginal-Bohm regime with "
        "0 < phi_b <= 0.05");
  }
  DegenerateEnvelope env;
  env.Gamma = envelope_gamma(p);
  const double g = env.Gamma;
  env.c = {1.0, -2.0 * g, 6.0 * g * g, -24.0 * g * g * g};
  const int N = prof.grid.N;
  const double dx = prof.grid.dx();
  env.G.resize(N);
  for (int j = 0; j < N; ++j) {
    env.G[j] = g * prof.grid.node(j) + 1.0 / std::sqrt(prof.phi_b);
  }
  env.field_names = {"-phi", "n-1", "log n", "u/u_inf-1", "(T/T_inf-1)/gamma"};
  // The density rows are rebuilt from delta = f^{-1}(phi) - 1 instead of the
  // stored n = 1 + delta: in the far tail delta ~ 1e-6 and the stored form
  // quantizes it to 1 ulp of 1.0, which the G^5/dx^3 amplification of the
  // third difference would turn into O(10) defect noise.
  std::vector<double> delta(N);
  for (int j = 0; j < N; ++j) {
    delta[j] = bernoulli_inverse_delta(prof.phi[j], p);
  }
  std::vector<double> U(N), d1(N), d2(N), d3(N);
  for (int row = 0; row < 5; ++row) {
    for (int j = 0; j < N; ++j) {
      switch (row) {
        case 0: U[j] = -prof.phi[j]; break;
        case 1: U[j] = delta[j]; break;
        case 2: U[j] = std::log1p(delta[j]); break;
        case 3: U[j] = -delta[j] / (1.0 + delta[j]); break;
        case 4:
          U[j] = std::expm1((p.gamma - 1.0) * std::log1p(delta[j])) / p.gamma;
          break;
      }
    }
    detail::diff1(U, dx, d1);
    detail::diff2(U, dx, d2);
    // Centered third difference; valid two nodes in from each end.
    for (int j = 2; j < N - 2; ++j) {
      d3[j] = (U[j + 2] - 2.0 * U[j + 1] + 2.0 * U[j - 1] - U[j - 2]) /
              (2.0 * dx * dx * dx);
    }
    std::array<double, 4> defects{};
    for (int j = 2; j < N - 2; ++j) {
      const double G = env.G[j];
      const double G2 = G * G;
      defects[0] = std::max(defects[0], std::abs(U[j] * G2 + env.c[0]));
      if (prof.tail_start >= 0 && std::abs(j - prof.tail_start) <= 2) {
        continue;  // stencil would straddle the analytic-tail splice
      }
      defects[1] = std::max(defects[1], std::abs(d1[j] * G2 * G + env.c[1]));
      defects[2] =
          std::max(defects[2], std::abs(d2[j] * G2 * G2 + env.c[2]));
      defects[3] =
          std::max(defects[3], std::abs(d3[j] * G2 * G2 * G + env.c[3]));
    }
    env.defects_all[row] = defects;
    if (row == 0) env.sup_defects = defects;
  }
  return env;
}

ProfileSample sample_profile(const StationaryProfile& prof, double x) {
  const Grid& g = prof.grid;
  if (x < 0.0 || x > g.L * (1.0 + 1e-12)) {
    throw std::out_of_range("sample_profile: x = " + std::to_string(x) +
                            " outside [0, " + std::to_string(g.L) + "]");
  }
  x = std::min(x, g.L);
  const double dx = g.dx();
  // 4-point Lagrange stencil starting at j0; exact at the nodes.
  int j0 = static_cast<int>(std::floor(x / dx)) - 1;
  j0 = std::clamp(j0, 0, g.N - 4);
  double w[4];
  for (int a = 0; a < 4; ++a) {
    w[a] = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      w[a] *= (x - g.node(j0 + b)) / (g.node(j0 + a) - g.node(j0 + b));
    }
  }
  auto interp = [&](const std::vector<double>& f) {
    return w[0] * f[j0] + w[1] * f[j0 + 1] + w[2] * f[j0 + 2] +
           w[3] * f[j0 + 3];
  };
  return {interp(prof.n), interp(prof.u), interp(prof.T), interp(prof.phi),
          interp(prof.phi_x)};
}

}  // namespace sheathlab
