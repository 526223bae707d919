#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sheathlab/model.hpp"

using namespace sheathlab;

namespace {

PhysicalParams nondeg_params() {
  PhysicalParams p;
  p.m = 1.0; p.gamma = 2.0; p.R = 1.0; p.T_inf = 1.0;
  p.u_inf = -2.0; p.u_e = 2.0 * std::exp(0.05);
  return p;
}

PhysicalParams degen_params() {
  PhysicalParams p = nondeg_params();
  p.u_inf = -std::sqrt(3.0);
  p.u_e = std::sqrt(3.0) * std::exp(0.01);
  return p;
}

// Oracle: dumb composite Simpson with a fixed (large) panel count. Written
// independently of the library quadrature on purpose.
template <class F>
double simpson_oracle(const F& f, double a, double b, int panels = 20000) {
  double s = f(a) + f(b);
  const double h = (b - a) / (2.0 * panels);
  for (int i = 1; i < 2 * panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Oracle: pure bisection for f(n) = phi on [lo, hi], 200 iterations.
double bisect_oracle(const PhysicalParams& p, double phi, double lo, double hi) {
  auto g = [&](double n) { return bernoulli_f(n, p) - phi; };
  double glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((glo < 0) == (gm < 0)) { lo = mid; glo = gm; } else { hi = mid; }
  }
  return 0.5 * (lo + hi);
}

// Oracle: closed form of V via the antiderivative of f along the branch.
// With n = f^{-1}(phi),
//   int_0^phi f^{-1} = n f(n) - int_1^n f,
//   int_1^n f = A*((n^g - 1)/g - (n - 1)) + B*(2 - 1/n - n),
// where A = gamma R T_inf/(gamma-1), B = m u_inf^2/2, g = gamma. Independent
// of the quadrature route.
double V_closed_form(const PhysicalParams& p, double phi) {
  const double n = bernoulli_inverse(phi, p);
  const double A = p.gamma * p.R * p.T_inf / (p.gamma - 1.0);
  const double B = 0.5 * p.m * p.u_inf * p.u_inf;
  const double int_f = A * ((std::pow(n, p.gamma) - 1.0) / p.gamma - (n - 1.0)) +
                       B * (2.0 - 1.0 / n - n);
  return n * bernoulli_f(n, p) - int_f - (1.0 - std::exp(-phi));
}

double lambda0_residual(double lam, double gamma) {
  return lam * (lam - 1.0) * (lam - 2.0) - 12.0 * (2.0 * lam / (gamma + 1.0) + 2.0);
}

}  // namespace

TEST_CASE("parameter validation names the violated constraint") {
  PhysicalParams p = nondeg_params();
  CHECK_NOTHROW(p.validate());
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = nondeg_params(); p.u_inf = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = nondeg_params(); p.u_e = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = nondeg_params(); p.m = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = nondeg_params(); p.T_inf = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("classify puts the reference parameter sets in the right regimes") {
  // Bohm threshold for m=1, gamma=2, R=1, T_inf=1 is u_inf^2 = 3; the sonic
  // threshold is u_inf^2 = 2.
  PhysicalParams p = nondeg_params();
  CHECK(classify(p).tag == RegimeTag::Nondegenerate);
  CHECK(classify(p).mach_margin == doctest::Approx(1.0));

  p.u_inf = -std::sqrt(3.0);
  CHECK(classify(p).tag == RegimeTag::Degenerate);

  p.u_inf = -1.6;
  CHECK(classify(p).tag == RegimeTag::ForbiddenWindow);

  p.u_inf = -1.2;
  CHECK(classify(p).tag == RegimeTag::Subsonic);

  // Edge of the forbidden window counts as subsonic (non-strict inequality).
  p.u_inf = -std::sqrt(2.0);
  CHECK(classify(p).tag == RegimeTag::Subsonic);
}

TEST_CASE("classify reports phi_b and the critical density") {
  PhysicalParams p = nondeg_params();
  const Regime r = classify(p);
  CHECK(r.phi_b == doctest::Approx(0.05).epsilon(1e-14));
  // c_inf = (m u^2/(gamma R T))^(1/(gamma+1)) = 4/2 ^(1/3) = 2^(1/3).
  CHECK(r.c_inf == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
}

TEST_CASE("characteristic speeds: closed-form example and ordering") {
  PhysicalParams p = nondeg_params();
  // m=1: lambda = u -/+ sqrt(gamma R T) => (-2-sqrt2, -2, -2+sqrt2).
  const Characteristics c = characteristics(-2.0, 1.0, p);
  CHECK(c.lambda1 == doctest::Approx(-2.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(c.lambda2 == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(c.lambda3 == doctest::Approx(-2.0 + std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(characteristics(-2.0, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(characteristics(-2.0, -1.0, p), std::domain_error);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> du(-5.0, 5.0), dT(0.01, 10.0), dm(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    PhysicalParams q = p;
    q.m = dm(rng);
    const double u = du(rng), T = dT(rng);
    const Characteristics k = characteristics(u, T, q);
    CHECK(k.lambda1 <= k.lambda2);
    CHECK(k.lambda2 <= k.lambda3);
    // lambda1 + lambda3 = (m+1) u identically.
    CHECK(k.lambda1 + k.lambda3 == doctest::Approx((q.m + 1.0) * u).epsilon(1e-12));
  }
}

TEST_CASE("characteristics are all negative near the far field in Bohm regimes") {
  for (const PhysicalParams& p : {nondeg_params(), degen_params()}) {
    for (double fu : {0.9, 1.0, 1.1}) {
      for (double fT : {0.9, 1.0, 1.1}) {
        const Characteristics c = characteristics(p.u_inf * fu, p.T_inf * fT, p);
        CHECK(c.lambda3 < 0.0);
      }
    }
  }
}

TEST_CASE("bernoulli_f: anchor values and shape") {
  PhysicalParams p = nondeg_params();
  CHECK(bernoulli_f(1.0, p) == 0.0);
  // f(2) = 2*(2-1) + 2*(1/4-1) = 0.5 for these parameters.
  CHECK(bernoulli_f(2.0, p) == doctest::Approx(0.5).epsilon(1e-14));
  // f'(1) = -m u^2 + gamma R T = -2.
  CHECK(bernoulli_f_prime(1.0, p) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK_THROWS_AS(bernoulli_f(0.0, p), std::domain_error);
  CHECK_THROWS_AS(bernoulli_f(-1.0, p), std::domain_error);

  // Strictly decreasing below c_inf, increasing above; f' vanishes at c_inf.
  const double c = critical_density(p);
  double prev = bernoulli_f(1e-3, p);
  for (int i = 1; i <= 1000; ++i) {
    const double n = 1e-3 + (c - 1e-3) * i / 1000.0;
    const double v = bernoulli_f(n, p);
    CHECK(v < prev);
    prev = v;
  }
  prev = bernoulli_f(c, p);
  for (int i = 1; i <= 1000; ++i) {
    const double n = c + 3.0 * i / 1000.0;
    const double v = bernoulli_f(n, p);
    CHECK(v > prev);
    prev = v;
  }
  const double h = 1e-6;
  CHECK(std::abs((bernoulli_f(c + h, p) - bernoulli_f(c - h, p)) / (2 * h)) < 1e-4);
}

TEST_CASE("bernoulli_f matches quadrature of its derivative") {
  PhysicalParams p = nondeg_params();
  for (double n : {0.3, 0.7, 1.2, 2.5}) {
    const double q = simpson_oracle([&](double s) { return bernoulli_f_prime(s, p); }, 1.0, n);
    CHECK(bernoulli_f(n, p) == doctest::Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("bernoulli_inverse: identity, round trips, branch errors") {
  PhysicalParams p = nondeg_params();
  CHECK(bernoulli_inverse(0.0, p) == doctest::Approx(1.0).epsilon(1e-14));

  // Independent bisection oracle at a generic point.
  const double n_oracle = bisect_oracle(p, 0.1, 1e-6, critical_density(p));
  CHECK(bernoulli_inverse(0.1, p) == doctest::Approx(n_oracle).epsilon(1e-12));

  // Round trip n -> f -> n on the branch, relative 1e-10.
  const double c = critical_density(p);
  for (double n : {0.05, 0.3, 0.8, 0.999, 1.0, 1.1, 0.999 * c}) {
    const double back = bernoulli_inverse(bernoulli_f(n, p), p);
    CHECK(back == doctest::Approx(n).epsilon(1e-10));
  }
  // And phi -> n -> phi with residual tolerance.
  for (double phi : {-0.2, -0.01, 0.0, 1e-8, 0.05, 0.4, 3.0}) {
    const double n = bernoulli_inverse(phi, p);
    CHECK(bernoulli_f(n, p) == doctest::Approx(phi).epsilon(1e-12));
  }

  // Below the fold value f(c_inf) nothing on the branch attains phi.
  const double f_fold = bernoulli_f(c, p);
  CHECK_THROWS_AS(bernoulli_inverse(f_fold - 1e-3, p), std::out_of_range);
  // Beyond the n_min cutoff (gigantic phi) is out of range too.
  CHECK_THROWS_AS(bernoulli_inverse(1e30, p), std::out_of_range);
}

TEST_CASE("bernoulli_inverse_delta is accurate for tiny phi") {
  PhysicalParams p = nondeg_params();
  // n(phi) - 1 = phi/f'(1) + O(phi^2) with f'(1) = -2.
  for (double phi : {1e-10, 1e-8, 1e-6}) {
    const double d = bernoulli_inverse_delta(phi, p);
    CHECK(d == doctest::Approx(-0.5 * phi).epsilon(1e-4));
  }
  // Degenerate parameters: f'(1) = -1.
  PhysicalParams q = degen_params();
  const double d = bernoulli_inverse_delta(1e-9, q);
  CHECK(d == doctest::Approx(-1e-9).epsilon(1e-4));
}

TEST_CASE("bernoulli_inverse handles the increasing (subsonic) branch") {
  PhysicalParams p = nondeg_params();
  p.u_inf = -1.2;  // c_inf < 1, branch [c_inf, inf) with f increasing
  p.u_e = 1.2;
  const double c = critical_density(p);
  CHECK(c < 1.0);
  for (double n : {1.001 * c, 0.9, 1.0, 1.5, 4.0}) {
    const double back = bernoulli_inverse(bernoulli_f(n, p), p);
    CHECK(back == doctest::Approx(n).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bernoulli_inverse(bernoulli_f(c, p) - 1e-3, p), std::out_of_range);
}

TEST_CASE("sagdeev_V: quadrature against independent oracles") {
  PhysicalParams p = nondeg_params();
  CHECK(sagdeev_V(0.0, p) == 0.0);

  // Independent composite-Simpson oracle on the same integrand definition.
  // Quadrature tolerance is 1e-12 absolute, so compare absolutely.
  for (double phi : {0.01, 0.05, 0.2, -0.05, -0.15}) {
    const double oracle = simpson_oracle(
        [&](double eta) { return bernoulli_inverse(eta, p) - std::exp(-eta); },
        0.0, phi);
    CHECK(std::abs(sagdeev_V(phi, p) - oracle) < 2e-12);
  }

  // Closed-form antiderivative route.
  for (double phi : {0.01, 0.05, 0.3, -0.1}) {
    CHECK(std::abs(sagdeev_V(phi, p) - V_closed_form(p, phi)) < 2e-12);
  }
}

TEST_CASE("sagdeev_V: derivatives at zero") {
  PhysicalParams p = nondeg_params();
  const double h = 1e-4;
  // V'(0) = 0: first central difference. Truncation is V'''(0) h^2 / 6 and
  // the quadrature noise floor is ~tol/h, so allow a few times 1e-8.
  const double v1 = (sagdeev_V(h, p) - sagdeev_V(-h, p)) / (2.0 * h);
  CHECK(std::abs(v1) < 5e-8);
  // V''(0) = 1 + 1/f'(1) = 0.5 for the strict-Bohm example.
  CHECK(sagdeev_V2_at_zero(p) == doctest::Approx(0.5).epsilon(1e-6));
  // Marginal Bohm: V''(0) = 0 up to the V''''(0) h^2 / 12 truncation (~2e-7).
  CHECK(std::abs(sagdeev_V2_at_zero(degen_params())) < 5e-7);
  // Subsonic: V''(0) = 1 + 1/f'(1) with f'(1) = -1.44 + 2 = 0.56 -> positive.
  PhysicalParams s = nondeg_params();
  s.u_inf = -1.2; s.u_e = 1.2;
  CHECK(sagdeev_V2_at_zero(s) == doctest::Approx(1.0 + 1.0 / 0.56).epsilon(1e-6));
}

TEST_CASE("phi_b anchor values") {
  PhysicalParams p = nondeg_params();
  p.u_e = 2.0;
  CHECK(phi_b(p) == 0.0);
  p.u_e = 2.0 * std::exp(1.0);
  CHECK(phi_b(p) == doctest::Approx(1.0).epsilon(1e-14));
  p.u_e = 2.0 * 0.99;
  CHECK(phi_b(p) == doctest::Approx(std::log(0.99)).epsilon(1e-14));
}

TEST_CASE("lambda0: bracketing, residual, and the large-gamma limit") {
  // gamma -> infinity limit equation lambda(lambda-1)(lambda-2) = 24 has the
  // exact root 4 (4*3*2 = 24).
  CHECK(4.0 * 3.0 * 2.0 == 24.0);

  // The fixed upper bracket is the root of the gamma -> 1 equation
  // lambda(lambda-1)(lambda-2) - 12(lambda+2) = 0, quoted as 5.5693...;
  // its residual there is small and the root lies in [5.5693, 5.5694].
  CHECK(std::abs(5.5693 * 4.5693 * 3.5693 - 12.0 * 7.5693) < 1e-2);
  auto limit_poly = [](double lam) { return lam * (lam - 1) * (lam - 2) - 12 * (lam + 2); };
  CHECK(limit_poly(5.5693) < 0.0);
  CHECK(limit_poly(5.5694) > 0.0);

  for (double gamma : {1.01, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
    const double lam = lambda0(gamma);
    CHECK(lam > 4.0);
    CHECK(lam < 5.5694);
    CHECK(std::abs(lambda0_residual(lam, gamma)) < 1e-9);
  }
  // Monotone decreasing toward 4 as gamma grows.
  CHECK(lambda0(2.0) < lambda0(1.5));
  CHECK(lambda0(100.0) < lambda0(10.0));
  CHECK(std::abs(lambda0(1e12) - 4.0) < 1e-9);

  CHECK_THROWS_AS(lambda0(1.0), std::invalid_argument);
}
