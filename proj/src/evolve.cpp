#include "sheathlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sheathlab/errors.hpp"
#include "sheathlab/poisson.hpp"

namespace sheathlab {

void PerturbationSpec::validate() const {
  if (!std::isfinite(amplitude))
    throw std::invalid_argument("perturbation: amplitude must be finite");
  switch (shape) {
    case Shape::None:
      break;
    case Shape::GaussianBump:
      if (!(width > 0.0))
        throw std::invalid_argument("perturbation: width must be > 0");
      break;
    case Shape::ExponentialTail:
    case Shape::AlgebraicTail:
      if (!(decay >= 0.0))
        throw std::invalid_argument("perturbation: decay must be >= 0");
      break;
  }
}

double perturbation_shape(const PerturbationSpec& pert, double x) {
  switch (pert.shape) {
    case PerturbationSpec::Shape::None:
      return 0.0;
    case PerturbationSpec::Shape::GaussianBump: {
      const double z = (x - pert.center) / pert.width;
      return pert.amplitude * std::exp(-0.5 * z * z);
    }
    case PerturbationSpec::Shape::ExponentialTail:
      return pert.amplitude * std::exp(-pert.decay * x);
    case PerturbationSpec::Shape::AlgebraicTail:
      return pert.amplitude * std::pow(1.0 + x, -pert.decay);
  }
  return 0.0;
}

void SimConfig::validate() const {
  params.validate();
  grid.validate();
  if (!(cfl > 0.0 && cfl <= 0.9))
    throw std::invalid_argument("run: cfl must be in (0, 0.9]");
  if (!(t_end > 0.0)) throw std::invalid_argument("run: t_end must be > 0");
  if (!(output_every > 0.0))
    throw std::invalid_argument("run: output_every must be > 0");
  perturbation.validate();
  weight.validate();
}

FarPin far_pin(const StationaryProfile& profile) {
  const int last = profile.grid.N - 1;
  return FarPin{std::log(profile.n[last]), profile.u[last], profile.T[last],
                profile.phi[last]};
}

CoupledState initial_state(const StationaryProfile& profile,
                           const PerturbationSpec& pert,
                           const PhysicalParams& params) {
  params.validate();
  pert.validate();
  const Grid& grid = profile.grid;
  const int N = grid.N;
  CoupledState st;
  st.fluid.grid = grid;
  st.fluid.t = 0.0;
  st.fluid.v.resize(N);
  st.fluid.u = profile.u;
  st.fluid.T = profile.T;
  for (int j = 0; j < N; ++j) st.fluid.v[j] = std::log(profile.n[j]);
  for (int j = 0; j < N; ++j) {
    const double g = perturbation_shape(pert, grid.node(j));
    if (g == 0.0) continue;
    if (pert.on_v) st.fluid.v[j] += g;
    if (pert.on_u) st.fluid.u[j] += g;
    if (pert.on_T) st.fluid.T[j] += g;
  }
  for (int j = 0; j < N; ++j)
    if (!(st.fluid.T[j] > 0.0))
      throw SolverError(SolverError::Kind::Positivity,
                        "initial_state: perturbed temperature is not positive at node " +
                            std::to_string(j));
  st.E0 = profile.phi_x[0] + pert.r0;
  std::vector<double> n(N);
  for (int j = 0; j < N; ++j) n[j] = std::exp(st.fluid.v[j]);
  PoissonResult pr =
      solve_poisson(n, st.E0, grid, profile.phi[N - 1], profile.phi);
  st.phi = std::move(pr.phi);
  st.phi_x = std::move(pr.phi_x);
  return st;
}

namespace {

// Second-order rightward gradient; the last node is pinned, so its
// derivative is zero by construction.
void gradient_rightward(const std::vector<double>& f, double dx,
                        std::vector<double>& out) {
  const int N = static_cast<int>(f.size());
  out.resize(f.size());
  const double inv = 1.0 / (2.0 * dx);
  for (int j = 0; j + 2 < N; ++j)
    out[j] = (-3.0 * f[j] + 4.0 * f[j + 1] - f[j + 2]) * inv;
  out[N - 2] = (f[N - 1] - f[N - 3]) * inv;
  out[N - 1] = 0.0;
}

}  // namespace

Derivatives rhs(const FluidState& state, const std::vector<double>& phi_x,
                const PhysicalParams& params) {
  const Grid& grid = state.grid;
  const int N = grid.N;
  if (static_cast<int>(state.v.size()) != N ||
      static_cast<int>(state.u.size()) != N ||
      static_cast<int>(state.T.size()) != N ||
      static_cast<int>(phi_x.size()) != N)
    throw std::invalid_argument("rhs: field size does not match the grid");

  for (int j = 0; j < N; ++j) {
    if (!(state.T[j] > 0.0))
      throw SolverError(SolverError::Kind::Positivity,
                        "rhs: nonpositive temperature at node " + std::to_string(j));
    const Characteristics ch = characteristics(state.u[j], state.T[j], params);
    if (ch.lambda3 >= 0.0)
      throw SolverError(SolverError::Kind::CharacteristicSign,
                        "rhs: lambda3 >= 0 at node " + std::to_string(j) +
                            "; the rightward stencils are no longer upwind");
  }

  const double dx = grid.dx();
  std::vector<double> vx, ux, Tx;
  gradient_rightward(state.v, dx, vx);
  gradient_rightward(state.u, dx, ux);
  gradient_rightward(state.T, dx, Tx);

  Derivatives d;
  d.dv.resize(N);
  d.du.resize(N);
  d.dT.resize(N);
  const double R_over_m = params.R / params.m;
  const double gm1 = params.gamma - 1.0;
  for (int j = 0; j + 1 < N; ++j) {
    const double u = state.u[j], T = state.T[j];
    d.dv[j] = -(u * vx[j] + ux[j]);
    d.du[j] = -u * ux[j] - R_over_m * (T * vx[j] + Tx[j]) + phi_x[j] / params.m;
    d.dT[j] = -u * Tx[j] - gm1 * T * ux[j];
  }
  d.dv[N - 1] = d.du[N - 1] = d.dT[N - 1] = 0.0;
  return d;
}

double boundary_flux(double n0, double u0, double phi0,
                     const PhysicalParams& params) {
  return n0 * u0 + params.u_e * std::exp(-phi0);
}

CoupledState step(const CoupledState& state, const PhysicalParams& params,
                  double cfl, const FarPin& pin, double dt_max) {
  const Grid& grid = state.fluid.grid;
  const int N = grid.N;
  const double dx = grid.dx();

  double lam = 0.0;
  for (int j = 0; j < N; ++j) {
    const Characteristics ch =
        characteristics(state.fluid.u[j], state.fluid.T[j], params);
    lam = std::max(lam, std::abs(ch.lambda1));
  }
  double dt = cfl * dx / lam;
  if (dt_max > 0.0) dt = std::min(dt, dt_max);

  const Derivatives d1 = rhs(state.fluid, state.phi_x, params);
  const double f1 = boundary_flux(std::exp(state.fluid.v[0]), state.fluid.u[0],
                                  state.phi[0], params);

  auto advance = [&](const Derivatives& d, double h, double w1, double w2,
                     const Derivatives* d2) {
    FluidState f;
    f.grid = grid;
    f.t = state.fluid.t + h;
    f.v.resize(N);
    f.u.resize(N);
    f.T.resize(N);
    for (int j = 0; j < N; ++j) {
      const double av = d2 ? w1 * d.dv[j] + w2 * d2->dv[j] : d.dv[j];
      const double au = d2 ? w1 * d.du[j] + w2 * d2->du[j] : d.du[j];
      const double aT = d2 ? w1 * d.dT[j] + w2 * d2->dT[j] : d.dT[j];
      f.v[j] = state.fluid.v[j] + h * av;
      f.u[j] = state.fluid.u[j] + h * au;
      f.T[j] = state.fluid.T[j] + h * aT;
    }
    f.v[N - 1] = pin.v;
    f.u[N - 1] = pin.u;
    f.T[N - 1] = pin.T;
    return f;
  };

  auto coupled = [&](FluidState&& fluid, double E0,
                     const std::vector<double>& guess) {
    CoupledState out;
    out.fluid = std::move(fluid);
    out.E0 = E0;
    std::vector<double> n(N);
    for (int j = 0; j < N; ++j) n[j] = std::exp(out.fluid.v[j]);
    PoissonResult pr = solve_poisson(n, E0, grid, pin.phi, guess);
    out.phi = std::move(pr.phi);
    out.phi_x = std::move(pr.phi_x);
    return out;
  };

  const CoupledState mid =
      coupled(advance(d1, dt, 1.0, 0.0, nullptr), state.E0 - dt * f1, state.phi);

  const Derivatives d2 = rhs(mid.fluid, mid.phi_x, params);
  const double f2 = boundary_flux(std::exp(mid.fluid.v[0]), mid.fluid.u[0],
                                  mid.phi[0], params);

  return coupled(advance(d1, dt, 0.5, 0.5, &d2),
                 state.E0 - 0.5 * dt * (f1 + f2), mid.phi);
}

RunResult run(const SimConfig& config, const DiagnosticSink& sink) {
  config.validate();
  const StationaryProfile profile = solve_sheath(config.params, config.grid);
  CoupledState state = initial_state(profile, config.perturbation, config.params);
  const FarPin pin = far_pin(profile);

  RunResult out;
  out.E0_stationary = profile.phi_x[0];

  auto emit = [&](const CoupledState& s) {
    const DiagnosticRecord rec = make_record(s.fluid, s.phi, s.E0, profile,
                                             config.params, config.weight);
    out.records.push_back(rec);
    if (sink) sink(rec);
  };

  emit(state);
  const double t_end = config.t_end;
  long k = 1;
  double target = std::min(k * config.output_every, t_end);
  while (state.fluid.t < t_end * (1.0 - 1e-12)) {
    state = step(state, config.params, config.cfl, pin,
                 target - state.fluid.t);
    if (state.fluid.t >= target - 1e-12 * std::max(1.0, target)) {
      emit(state);
      ++k;
      target = std::min(k * config.output_every, t_end);
      // output_every below time-rounding noise: jump straight to the end
      if (target <= state.fluid.t) target = t_end;
    }
  }
  out.profile = profile;
  return out;
}

}  // namespace sheathlab
