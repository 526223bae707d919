#include "sheathlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sheathlab/detail/numerics.hpp"
#include "sheathlab/errors.hpp"

namespace sheathlab {

void WeightSpec::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("weight: beta must be > 0");
  if (order < 0 || order > 2)
    throw std::invalid_argument("weight: order must be in [0, 2]");
}

double weight_at(const WeightSpec& spec, double x) {
  if (spec.kind == WeightKind::Exponential) return std::exp(spec.beta * x);
  return std::pow(1.0 + spec.beta * x, spec.alpha);
}

PerturbationFields perturbation(const FluidState& state,
                                const std::vector<double>& phi,
                                const StationaryProfile& profile) {
  if (!(state.grid == profile.grid))
    throw std::invalid_argument("perturbation: state and profile grids differ");
  const std::size_t n = static_cast<std::size_t>(state.grid.N);
  if (state.v.size() != n || state.u.size() != n || state.T.size() != n ||
      phi.size() != n || profile.n.size() != n)
    throw std::invalid_argument("perturbation: field size does not match the grid");
  PerturbationFields out;
  out.grid = state.grid;
  out.phi_p.resize(n);
  out.psi.resize(n);
  out.zeta.resize(n);
  out.sigma.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.phi_p[j] = state.v[j] - std::log(profile.n[j]);
    out.psi[j] = state.u[j] - profile.u[j];
    out.zeta[j] = state.T[j] - profile.T[j];
    out.sigma[j] = phi[j] - profile.phi[j];
  }
  return out;
}

namespace {

// Integral of W * sum_{i<=order} (d^i f)^2, trapezoid rule. No square root.
// The weight can overflow to inf far out where the fields are exactly zero;
// skipping zero summands and sub-1e-300 products keeps the sum finite there
// without touching any resolvable contribution.
double weighted_square(std::span<const double> f, const WeightSpec& spec,
                       const Grid& grid) {
  spec.validate();
  grid.validate();
  const std::size_t n = static_cast<std::size_t>(grid.N);
  if (f.size() != n)
    throw std::invalid_argument("weighted_norm: field size does not match the grid");
  const double dx = grid.dx();
  std::vector<double> d1, d2;
  if (spec.order >= 1) detail::diff1(f, dx, d1);
  if (spec.order >= 2) detail::diff2(f, dx, d2);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = f[j] * f[j];
    if (spec.order >= 1) s += d1[j] * d1[j];
    if (spec.order >= 2) s += d2[j] * d2[j];
    if (s == 0.0) continue;
    const double term = weight_at(spec, grid.node(static_cast<int>(j))) * s;
    if (term < 1e-300) continue;
    acc += (j == 0 || j + 1 == n ? 0.5 : 1.0) * term * dx;
  }
  return acc;
}

}  // namespace

double weighted_norm(std::span<const double> f, const WeightSpec& spec,
                     const Grid& grid) {
  return std::sqrt(weighted_square(f, spec, grid));
}

double weighted_norm(std::initializer_list<std::span<const double>> fields,
                     const WeightSpec& spec, const Grid& grid) {
  double acc = 0.0;
  for (const auto& f : fields) acc += weighted_square(f, spec, grid);
  return std::sqrt(acc);
}

double energy0_weighted(const FluidState& state,
                        const StationaryProfile& profile,
                        const PerturbationFields& pert,
                        const PhysicalParams& params, const WeightSpec& spec) {
  spec.validate();
  if (!(state.grid == profile.grid) || !(pert.grid == state.grid))
    throw std::invalid_argument("energy0_weighted: grids differ");
  const std::size_t n = static_cast<std::size_t>(state.grid.N);
  if (state.T.size() != n || profile.n.size() != n || pert.phi_p.size() != n ||
      pert.psi.size() != n || pert.zeta.size() != n)
    throw std::invalid_argument("energy0_weighted: field size does not match the grid");
  const double dx = state.grid.dx();
  const double half_R_over_gm1 = 0.5 * params.R / (params.gamma - 1.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double T = state.T[j];
    if (!(T > 0.0))
      throw SolverError(SolverError::Kind::Positivity,
                        "energy0_weighted: nonpositive temperature");
    const double nt = profile.n[j];
    const double e = 0.5 * nt * params.R * T * pert.phi_p[j] * pert.phi_p[j] +
                     0.5 * nt * params.m * pert.psi[j] * pert.psi[j] +
                     nt * half_R_over_gm1 / T * pert.zeta[j] * pert.zeta[j];
    if (e == 0.0) continue;
    const double term = weight_at(spec, state.grid.node(static_cast<int>(j))) * e;
    if (term < 1e-300) continue;
    acc += (j == 0 || j + 1 == n ? 0.5 : 1.0) * term * dx;
  }
  return acc;
}

DiagnosticRecord make_record(const FluidState& state,
                             const std::vector<double>& phi, double E0,
                             const StationaryProfile& profile,
                             const PhysicalParams& params,
                             const WeightSpec& spec) {
  const PerturbationFields pert = perturbation(state, phi, profile);
  WeightSpec h1 = spec;
  h1.order = 1;
  WeightSpec h2 = spec;
  h2.order = 2;
  DiagnosticRecord rec;
  rec.t = state.t;
  rec.e_weighted = energy0_weighted(state, profile, pert, params, spec);
  rec.norm_h1 = weighted_norm({pert.phi_p, pert.psi, pert.zeta}, h1, state.grid);
  rec.norm_h2 = weighted_norm({pert.phi_p, pert.psi, pert.zeta}, h2, state.grid);
  rec.norm_sigma =
      weighted_norm(std::span<const double>(pert.sigma), h2, state.grid);
  rec.sigma0 = pert.sigma[0];
  rec.sigmax0 = E0 - profile.phi_x[0];
  rec.e0_boundary = E0;
  return rec;
}

DecayFit fit_decay(std::span<const DiagnosticRecord> series, FitModel model,
                   double beta, const FitWindow* window) {
  if (series.empty()) throw std::invalid_argument("fit_decay: empty series");
  if (model == FitModel::Algebraic && !(beta > 0.0))
    throw std::invalid_argument("fit_decay: algebraic model needs beta > 0");
  const double t_end = series.back().t;
  const FitWindow win =
      window ? *window : FitWindow{std::max(1.0, 0.1 * t_end), t_end};
  if (!(win.t_hi > win.t_lo)) {
    // the default window collapses when the series ends by t = 1: that is a
    // data-shortage condition, not a caller bug
    if (!window)
      throw SolverError(SolverError::Kind::InsufficientWindow,
                        "fit_decay: series too short for the default window "
                        "[max(1, t_end/10), t_end]");
    throw std::invalid_argument("fit_decay: empty window");
  }

  std::vector<double> xs, ys;
  std::size_t in_window = 0, floored = 0;
  for (const DiagnosticRecord& r : series) {
    if (r.t < win.t_lo || r.t > win.t_hi) continue;
    ++in_window;
    if (!(r.e_weighted > 1e-14)) {
      ++floored;
      continue;
    }
    xs.push_back(model == FitModel::Exponential ? r.t
                                                : std::log1p(beta * r.t));
    ys.push_back(std::log(r.e_weighted));
  }
  if (in_window < 20)
    throw SolverError(SolverError::Kind::InsufficientWindow,
                      "fit_decay: fewer than 20 records in the fit window");
  if (2 * floored >= in_window || xs.size() < 2)
    throw SolverError(SolverError::Kind::DegenerateFit,
                      "fit_decay: energies at the 1e-14 floor dominate the window");
  const detail::LineFit lf = detail::fit_line(xs, ys);
  DecayFit out;
  out.model = model;
  out.exponent = lf.slope;
  out.r_squared = lf.r_squared;
  out.t_lo = win.t_lo;
  out.t_hi = win.t_hi;
  return out;
}

void SupDiagnostic::observe(const DiagnosticRecord& rec) {
  value_ = std::max(value_, rec.norm_h2 + std::abs(rec.sigmax0));
}

}  // namespace sheathlab
