#pragma once

// Small shared numerical kernels. Header-only; no state.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sheathlab::detail {

// ---------------------------------------------------------------- quadrature

// Recursive adaptive Simpson with absolute tolerance. `fa`, `fm`, `fb` are
// integrand values at a, (a+b)/2, b; `whole` the Simpson estimate over [a,b].
template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// ------------------------------------------------------------- linear solves

// Thomas algorithm for a tridiagonal system; diagonals (lo, di, up) of size n
// (lo[0] and up[n-1] unused). Overwrites rhs with the solution.
inline void solve_tridiagonal(std::vector<double>& lo, std::vector<double>& di,
                              std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t n = di.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

// ------------------------------------------------------------- least squares

struct LineFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 paired samples");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return out;
}

// ------------------------------------------------------- adaptive RK (scalar)

// One Cash-Karp RK45 step for autonomous y' = f(y). Returns the 5th-order
// solution and an embedded 4th/5th error estimate.
template <class F>
void rk45_step(const F& f, double y, double h, double& y5, double& err) {
  const double k1 = f(y);
  const double k2 = f(y + h * (0.2 * k1));
  const double k3 = f(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
  const double k4 = f(y + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
  const double k5 = f(y + h * (-11.0 / 54 * k1 + 2.5 * k2 - 70.0 / 27 * k3 + 35.0 / 27 * k4));
  const double k6 = f(y + h * (1631.0 / 55296 * k1 + 175.0 / 512 * k2 + 575.0 / 13824 * k3 +
                               44275.0 / 110592 * k4 + 253.0 / 4096 * k5));
  y5 = y + h * (37.0 / 378 * k1 + 250.0 / 621 * k3 + 125.0 / 594 * k4 + 512.0 / 1771 * k6);
  const double y4 = y + h * (2825.0 / 27648 * k1 + 18575.0 / 48384 * k3 + 13525.0 / 55296 * k4 +
                             277.0 / 14336 * k5 + 0.25 * k6);
  err = std::abs(y5 - y4);
}

// ------------------------------------------------------- finite differences

// First derivative, second order: centered inside, one-sided at the ends.
inline void diff1(std::span<const double> f, double h, std::vector<double>& out) {
  const std::size_t n = f.size();
  out.resize(n);
  if (n < 3) throw std::invalid_argument("diff1: need >= 3 nodes");
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
}

// Second derivative, second order: centered inside, one-sided at the ends.
inline void diff2(std::span<const double> f, double h, std::vector<double>& out) {
  const std::size_t n = f.size();
  out.resize(n);
  if (n < 4) throw std::invalid_argument("diff2: need >= 4 nodes");
  const double h2 = h * h;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
}

}  // namespace sheathlab::detail
