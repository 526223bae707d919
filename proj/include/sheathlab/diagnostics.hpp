#pragma once

#include <span>
#include <string>
#include <vector>

#include "sheathlab/grid.hpp"
#include "sheathlab/model.hpp"
#include "sheathlab/state.hpp"
#include "sheathlab/stationary.hpp"

namespace sheathlab {

enum class WeightKind { Exponential, Algebraic };

// Spatial weight W(x): e^{beta x} (exponential) or (1 + beta x)^alpha
// (algebraic). order selects the Sobolev order of weighted_norm.
struct WeightSpec {
  WeightKind kind = WeightKind::Exponential;
  double alpha = 0.0;
  double beta = 0.5;
  int order = 2;
  void validate() const;  // beta > 0, 0 <= order <= 2
};

double weight_at(const WeightSpec& spec, double x);

// Deviation from the stationary profile: (phi_p, psi, zeta, sigma) =
// (v - log n~, u - u~, T - T~, phi - phi~). All four vanish identically when
// the state equals the sheath.
struct PerturbationFields {
  std::vector<double> phi_p, psi, zeta, sigma;
  Grid grid;
};

PerturbationFields perturbation(const FluidState& state,
                                const std::vector<double>& phi,
                                const StationaryProfile& profile);

// sqrt( integral of W * sum_{j<=order} (d^j f)^2 ), trapezoid rule, centered
// differences inside and one-sided second-order stencils at the ends.
// Summands where W * f^2 would underflow below 1e-300 are dropped.
double weighted_norm(std::span<const double> f, const WeightSpec& spec,
                     const Grid& grid);

// Norm of a vector-valued field: sqrt of the sum of squared component norms.
double weighted_norm(std::initializer_list<std::span<const double>> fields,
                     const WeightSpec& spec, const Grid& grid);

// Weighted integral of the quadratic energy density
//   E0 = (n~/2) R T phi_p^2 + (n~/2) m psi^2 + (n~ R / (2(gamma-1) T)) zeta^2
// with T the full evolved temperature and n~ the stationary density.
// No square root: this is an energy, not a norm.
double energy0_weighted(const FluidState& state,
                        const StationaryProfile& profile,
                        const PerturbationFields& pert,
                        const PhysicalParams& params, const WeightSpec& spec);

// One diagnostics sample. norm_h2 is the weighted H2 norm of (phi_p, psi,
// zeta); norm_h1 the same truncated to order 1 (kept in the record for trend
// checks, not serialized); norm_sigma measures sigma up to order 2 under the
// same weight.
struct DiagnosticRecord {
  double t = 0.0;
  double e_weighted = 0.0;
  double norm_h1 = 0.0;
  double norm_h2 = 0.0;
  double norm_sigma = 0.0;
  double sigma0 = 0.0;
  double sigmax0 = 0.0;
  double e0_boundary = 0.0;
};

// Assemble one record: weighted norms of (phi_p, psi, zeta) at orders 1 and
// 2, the sigma norm at order 2, boundary values sigma(0) and sigma_x(0) =
// E0 - phi~_x(0), and the weighted energy.
DiagnosticRecord make_record(const FluidState& state,
                             const std::vector<double>& phi, double E0,
                             const StationaryProfile& profile,
                             const PhysicalParams& params,
                             const WeightSpec& spec);

enum class FitModel { Exponential, Algebraic };

// Decay fit of the weighted energy: linear least squares of log E against t
// (exponential model, E ~ e^{exponent t}) or against log(1 + beta t)
// (algebraic model, E ~ (1 + beta t)^{exponent}).
struct DecayFit {
  FitModel model = FitModel::Exponential;
  double exponent = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
};

struct FitWindow {
  double t_lo, t_hi;
};

// Default window [max(1, 0.1 t_end), t_end] skips the initial layer driven by
// the arbitrary boundary mismatch r0. Throws SolverError(InsufficientWindow)
// if fewer than 20 records fall in the window, SolverError(DegenerateFit) if
// most in-window energies sit below the 1e-14 floor.
DecayFit fit_decay(std::span<const DiagnosticRecord> series, FitModel model,
                   double beta, const FitWindow* window = nullptr);

// Running supremum of norm_h2 + |sigma_x(t,0)| over the emitted records.
class SupDiagnostic {
 public:
  void observe(const DiagnosticRecord& rec);
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

}  // namespace sheathlab
