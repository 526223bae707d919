#include "sheathlab/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sheathlab/detail/numerics.hpp"

namespace sheathlab {

namespace {

// Branch of f containing n = 1, as an interval [lo, hi] in density.
// Decreasing branch (0, c_inf] when c_inf >= 1, else increasing [c_inf, inf).
constexpr double kNMin = 1e-6;
constexpr double kNMax = 1e6;

// f(1+delta) evaluated without cancellation for small delta:
// (1+d)^p - 1 = expm1(p*log1p(d)).
double f_of_delta(double delta, const PhysicalParams& p) {
  const double A = p.gamma * p.R * p.T_inf / (p.gamma - 1.0);
  const double B = 0.5 * p.m * p.u_inf * p.u_inf;
  const double l = std::log1p(delta);
  return A * std::expm1((p.gamma - 1.0) * l) + B * std::expm1(-2.0 * l);
}

}  // namespace

void PhysicalParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("params: " + what); };
  if (!(m > 0.0)) fail("m must be > 0");
  if (!(gamma > 1.0)) fail("gamma must be > 1");
  if (!(R > 0.0)) fail("R must be > 0");
  if (!(T_inf > 0.0)) fail("T_inf must be > 0");
  if (!(u_inf < 0.0)) fail("u_inf must be < 0");
  if (!(u_e > 0.0)) fail("u_e must be > 0");
  if (!std::isfinite(q0)) fail("q0 must be finite");
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Subsonic: return "Subsonic";
    case RegimeTag::ForbiddenWindow: return "ForbiddenWindow";
    case RegimeTag::Nondegenerate: return "Nondegenerate";
    case RegimeTag::Degenerate: return "Degenerate";
  }
  return "?";
}

Regime classify(const PhysicalParams& p) {
  p.validate();
  const double u2 = p.u_inf * p.u_inf;
  const double sonic = p.gamma * p.R * p.T_inf / p.m;
  const double bohm = (p.gamma * p.R * p.T_inf + 1.0) / p.m;
  Regime r;
  r.mach_margin = u2 - bohm;
  r.phi_b = phi_b(p);
  r.c_inf = critical_density(p);
  const double scale = std::max(u2, bohm);
  if (std::abs(r.mach_margin) <= 1e-12 * scale) {
    r.tag = RegimeTag::Degenerate;
  } else if (r.mach_margin > 0.0) {
    r.tag = RegimeTag::Nondegenerate;
  } else if (u2 <= sonic * (1.0 + 1e-12)) {
    // Same relative slack as the Bohm equality: inputs like -sqrt(2) square
    // to the sonic value only up to round-off.
    r.tag = RegimeTag::Subsonic;
  } else {
    r.tag = RegimeTag::ForbiddenWindow;
  }
  return r;
}

Characteristics characteristics(double u, double T, const PhysicalParams& p) {
  if (!(T > 0.0)) throw std::domain_error("characteristics: T must be > 0");
  const double disc = (p.m - 1.0) * (p.m - 1.0) * u * u + 4.0 * p.gamma * p.R * T;
  const double root = std::sqrt(disc);
  const double s = (p.m + 1.0) * u;
  return {0.5 * (s - root), u, 0.5 * (s + root)};
}

double phi_b(const PhysicalParams& p) { return std::log(p.u_e / -p.u_inf); }

double critical_density(const PhysicalParams& p) {
  const double ratio = p.m * p.u_inf * p.u_inf / (p.gamma * p.R * p.T_inf);
  return std::pow(ratio, 1.0 / (p.gamma + 1.0));
}

double bernoulli_f(double n, const PhysicalParams& p) {
  if (!(n > 0.0)) throw std::domain_error("bernoulli_f: n must be > 0");
  return f_of_delta(n - 1.0, p);
}

double bernoulli_f_prime(double n, const PhysicalParams& p) {
  if (!(n > 0.0)) throw std::domain_error("bernoulli_f_prime: n must be > 0");
  const double mu2 = p.m * p.u_inf * p.u_inf;
  return (-mu2 + p.gamma * p.R * p.T_inf * std::pow(n, p.gamma + 1.0)) / (n * n * n);
}

double bernoulli_inverse_delta(double phi, const PhysicalParams& p) {
  if (phi == 0.0) return 0.0;
  const double c = critical_density(p);
  // Bracket [a, b] in delta = n - 1 along the branch through n = 1.
  const bool decreasing = c >= 1.0;
  double a = (decreasing ? kNMin : c) - 1.0;
  double b = (decreasing ? c : kNMax) - 1.0;

  const double f_fold = f_of_delta(c - 1.0, p);
  const double f_far = f_of_delta(decreasing ? a : b, p);
  if (phi < f_fold) {
    std::ostringstream os;
    os << "bernoulli_inverse: phi = " << phi << " below branch minimum f(c_inf) = " << f_fold;
    throw std::out_of_range(os.str());
  }
  if (phi > f_far) {
    std::ostringstream os;
    os << "bernoulli_inverse: phi = " << phi << " beyond branch cutoff " << f_far;
    throw std::out_of_range(os.str());
  }

  auto g = [&](double d) { return f_of_delta(d, p) - phi; };
  // Orient so g(a) <= 0 <= g(b).
  if (decreasing) std::swap(a, b);

  // Safeguarded Newton: bisection fallback keeps the bracket, Newton
  // accelerates once inside it. The iterate is carried in delta so that
  // densities adjacent to 1 are resolved at full relative accuracy.
  double x = 0.0;  // n = 1 is always on the branch
  double gx = g(x);
  if (gx == 0.0) return x;
  if (gx < 0.0) a = x; else b = x;
  for (int it = 0; it < 200; ++it) {
    const double fp = bernoulli_f_prime(1.0 + x, p);
    double xn;
    if (fp != 0.0) {
      xn = x - gx / fp;
      const double lo = std::min(a, b), hi = std::max(a, b);
      if (!(xn > lo && xn < hi)) xn = 0.5 * (a + b);
    } else {
      xn = 0.5 * (a + b);
    }
    const double gn = g(xn);
    if (gn == 0.0) return xn;
    if (gn < 0.0) a = xn; else b = xn;
    const double dx = std::abs(xn - x);
    x = xn;
    gx = gn;
    if (dx <= 1e-15 * std::abs(x) || std::abs(b - a) <= 1e-15 * std::min(std::abs(a), std::abs(b)))
      return x;
  }
  return x;
}

double bernoulli_inverse(double phi, const PhysicalParams& p) {
  return 1.0 + bernoulli_inverse_delta(phi, p);
}

double sagdeev_V(double phi, const PhysicalParams& p) {
  if (phi == 0.0) return 0.0;
  // Integrand f^{-1}(eta) - e^{-eta} written as (n-1) - expm1(-eta); both
  // terms vanish at eta = 0, which keeps the quadrature accurate for the
  // small orbits where V ~ phi^2 (or phi^3 at marginal Bohm).
  auto integrand = [&](double eta) {
    return bernoulli_inverse_delta(eta, p) - std::expm1(-eta);
  };
  return detail::adaptive_simpson(integrand, 0.0, phi, 1e-12);
}

double sagdeev_V2_at_zero(const PhysicalParams& p, double h) {
  return (sagdeev_V(h, p) + sagdeev_V(-h, p)) / (h * h);
}

double lambda0(double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("lambda0: gamma must be > 1");
  auto g = [gamma](double lam) {
    return lam * (lam - 1.0) * (lam - 2.0) - 12.0 * (2.0 * lam / (gamma + 1.0) + 2.0);
  };
  double lo = 4.0 + 1e-9, hi = 5.5694;
  if (g(lo) >= 0.0) {
    // Root sits between 4 and 4+1e-9 for very large gamma; g(4) < 0 always.
    hi = lo;
    lo = 4.0;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sheathlab
