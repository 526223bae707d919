#pragma once

#include <functional>
#include <vector>

#include "sheathlab/diagnostics.hpp"
#include "sheathlab/grid.hpp"
#include "sheathlab/model.hpp"
#include "sheathlab/state.hpp"
#include "sheathlab/stationary.hpp"

namespace sheathlab {

// Initial disturbance added on top of the stationary profile. Shapes:
//   GaussianBump      amplitude * exp(-(x-center)^2 / (2 width^2))
//   ExponentialTail   amplitude * exp(-decay x)
//   AlgebraicTail     amplitude * (1 + x)^{-decay}
// The bump is added to the selected fields (log density by default). r0 is
// the initial wall-field mismatch q0 - phi~_x(0).
struct PerturbationSpec {
  enum class Shape { None, GaussianBump, ExponentialTail, AlgebraicTail };
  Shape shape = Shape::None;
  double amplitude = 0.0;
  double center = 5.0;
  double width = 1.0;
  double decay = 1.0;
  bool on_v = true, on_u = false, on_T = false;
  double r0 = 0.0;
  void validate() const;  // width > 0 for bumps, decay >= 0 for tails
};

double perturbation_shape(const PerturbationSpec& pert, double x);

struct SimConfig {
  PhysicalParams params;
  Grid grid;
  double cfl = 0.5;
  double t_end = 50.0;
  double output_every = 0.1;
  PerturbationSpec perturbation;
  WeightSpec weight;
  void validate() const;  // 0 < cfl <= 0.9, t_end > 0, output_every > 0
};

// Fluid state coupled to the electrostatic potential and the wall field E0.
struct CoupledState {
  FluidState fluid;
  std::vector<double> phi, phi_x;
  double E0 = 0.0;
};

// Far-end anchor: the last grid node is held at these values every stage.
// They are the stationary profile values at x = L, which agree with the far
// field up to the profile's own residual decay there.
struct FarPin {
  double v, u, T, phi;
};

FarPin far_pin(const StationaryProfile& profile);

// Profile plus perturbation, with the potential solved consistently:
// E0 = phi~_x(0) + r0 and phi(L) anchored at the profile value. Throws
// SolverError(Positivity) if the perturbed temperature is not positive.
CoupledState initial_state(const StationaryProfile& profile,
                           const PerturbationSpec& pert,
                           const PhysicalParams& params);

struct Derivatives {
  std::vector<double> dv, du, dT;
};

// Right-hand side of the fluid system in (v, u, T):
//   v_t = -(u v_x + u_x)
//   u_t = -u u_x - (R/m)(T v_x + T_x) + phi_x / m
//   T_t = -u T_x - (gamma - 1) T u_x
// All characteristic speeds are negative in the admissible regime, so every
// spatial derivative uses the second-order rightward stencil; the last node
// is pinned (zero derivative). Throws SolverError(CharacteristicSign) if any
// lambda_3 >= 0 and SolverError(Positivity) if T <= 0.
Derivatives rhs(const FluidState& state, const std::vector<double>& phi_x,
                const PhysicalParams& params);

// Net charge flux onto the wall; dE0/dt = -boundary_flux.
double boundary_flux(double n0, double u0, double phi0,
                     const PhysicalParams& params);

// One Heun (RK2) step of the coupled system. dt = cfl dx / max|lambda_1|,
// optionally capped by dt_max (<= 0 means no cap). The Poisson problem is
// re-solved after each stage with the updated density and E0, warm-started
// from the previous potential.
CoupledState step(const CoupledState& state, const PhysicalParams& params,
                  double cfl, const FarPin& pin, double dt_max = 0.0);

using DiagnosticSink = std::function<void(const DiagnosticRecord&)>;

struct RunResult {
  StationaryProfile profile;
  std::vector<DiagnosticRecord> records;
  double E0_stationary = 0.0;  // phi~_x(0), the value E0(t) should settle to
};

// Full simulation: solve the sheath, perturb, advance to t_end emitting one
// record per output_every interval (plus t = 0 and t = t_end). The sink, if
// given, receives each record as it is produced so callers can flush partial
// series before a propagated error.
RunResult run(const SimConfig& config, const DiagnosticSink& sink = {});

}  // namespace sheathlab
