#pragma once

#include <string>

namespace sheathlab {

// Physical constants of the plasma model. Units are nondimensional; the far
// field is normalized to n = 1, phi = 0.
struct PhysicalParams {
  double m = 1.0;      // ion/electron mass ratio, > 0
  double gamma = 2.0;  // adiabatic exponent, > 1
  double R = 1.0;      // gas constant, > 0
  double T_inf = 1.0;  // far-field temperature, > 0
  double u_inf = -2.0; // far-field velocity, < 0 (flow into the wall)
  double u_e = 2.0;    // electron emission speed at the wall, > 0
  double q0 = 0.0;     // initial boundary field phi_x(0,0)

  void validate() const;  // throws std::invalid_argument naming the violated constraint
};

// Velocity regimes relative to the Bohm criterion
//   subsonic:   u_inf^2 <= gamma*R*T_inf/m
//   forbidden:  gamma*R*T_inf/m < u_inf^2 < (gamma*R*T_inf + 1)/m
//   degenerate: u_inf^2 = (gamma*R*T_inf + 1)/m  (marginal Bohm)
//   nondegenerate: u_inf^2 > (gamma*R*T_inf + 1)/m (strict Bohm)
enum class RegimeTag { Subsonic, ForbiddenWindow, Nondegenerate, Degenerate };

const char* to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag;
  double mach_margin;  // u_inf^2 - (gamma*R*T_inf + 1)/m
  double phi_b;        // wall potential log(u_e/|u_inf|)
  double c_inf;        // critical density (m*u_inf^2/(gamma*R*T_inf))^(1/(gamma+1))
};

// Degeneracy is detected with relative tolerance 1e-12 on mach_margin.
Regime classify(const PhysicalParams& p);

// Characteristic speeds of the fluid system at local state (u, T):
//   lambda_{1,3} = ((m+1)u -/+ sqrt((m-1)^2 u^2 + 4*gamma*R*T))/2,  lambda_2 = u.
// Always lambda1 <= lambda2 <= lambda3. Throws std::domain_error for T <= 0.
struct Characteristics {
  double lambda1, lambda2, lambda3;
};
Characteristics characteristics(double u, double T, const PhysicalParams& p);

// Wall potential determined by the zero-current boundary condition.
double phi_b(const PhysicalParams& p);

// Critical density where f' vanishes: c_inf = (m u_inf^2 / (gamma R T_inf))^(1/(gamma+1)).
double critical_density(const PhysicalParams& p);

// Bernoulli integral of the stationary flow,
//   f(n) = gamma*R*T_inf/(gamma-1) * (n^(gamma-1) - 1) + m*u_inf^2/2 * (n^-2 - 1),
// with f(1) = 0. Throws std::domain_error for n <= 0.
double bernoulli_f(double n, const PhysicalParams& p);

// f'(n) = (-m*u_inf^2 + gamma*R*T_inf*n^(gamma+1)) / n^3.
double bernoulli_f_prime(double n, const PhysicalParams& p);

// Inverse of f on the branch containing n = 1 (the branch (0, c_inf] where f
// decreases when c_inf >= 1, else [c_inf, inf) where f increases). Bracketed
// bisection seeded on the branch, refined by Newton. Throws std::out_of_range
// when phi is not attained on the branch.
double bernoulli_inverse(double phi, const PhysicalParams& p);

// Same root expressed as the offset delta = n - 1 at full relative accuracy;
// this is what keeps the pseudo-potential integrand accurate near phi = 0.
double bernoulli_inverse_delta(double phi, const PhysicalParams& p);

// Sagdeev pseudo-potential V(phi) = int_0^phi [f^{-1}(eta) - e^{-eta}] d eta,
// evaluated by adaptive Simpson quadrature (absolute tolerance 1e-12).
// V(0) = 0 exactly; stationary orbits satisfy (phi_x)^2 = 2 V(phi).
double sagdeev_V(double phi, const PhysicalParams& p);

// V''(0) estimated by second central differences of the quadrature (step h).
double sagdeev_V2_at_zero(const PhysicalParams& p, double h = 1e-4);

// Root of lambda(lambda-1)(lambda-2) - 12*(2*lambda/(gamma+1) + 2) = 0 in
// (4, 5.5694), bisected to absolute tolerance 1e-12. Requires gamma > 1.
double lambda0(double gamma);

}  // namespace sheathlab
