#pragma once

#include <span>
#include <vector>

#include "flatflow/grid.hpp"
#include "flatflow/physics.hpp"
#include "flatflow/run_result.hpp"
#include "flatflow/scenario.hpp"

namespace flatflow {

struct VeState {
  ScalarField saturation;
  double time = 0.0;
  long step_count = 0;
};

struct NonlocalVelocity {
  EdgeField edges;
  /// Per column: dz * sum_m lambda_tot(S_{i,m}) kappa_{i,m}.
  std::vector<double> column_denominators;
};

/// Everything the explicit transport update needs besides the state.
struct TransportData {
  Grid grid;
  FluidModel fluid;
  ScalarField porosity;
  std::vector<double> inflow;  ///< per layer; empty means no injection
  double slope_bound;          ///< fractional_flow_derivative_bound(fluid)
  double cfl_factor;

  static TransportData from_setup(const Setup& setup, double cfl_factor);
};

/// Injected and escaped mass per unit time through the lateral boundaries.
struct BoundaryRates {
  double injected = 0.0;
  double escaped = 0.0;
};

/// Nonlocal VE velocity. Interior x-edges average the adjacent columns'
/// normalized lambda*kappa; the inflow edge averages column 0 with a ghost
/// column carrying the inflow saturation (when `inflow` is non-empty) and
/// the outflow edge is one-sided. w follows by vertical telescoping.
NonlocalVelocity reconstruct_velocity(const ScalarField& s, const ScalarField& kappa,
                                      const FluidModel& fluid,
                                      std::span<const double> inflow = {});

/// Vertical velocities from the x-edge values: w = 0 at the bottom,
/// telescoped upwards, and exactly 0 on the top wall.
void telescope_vertical(EdgeField& edges);

/// F = |E| (max(v, 0) f(s_inside) + min(v, 0) f(s_outside)).
double upwind_flux(double normal_velocity, double s_inside, double s_outside,
                   double edge_length, const FluidModel& fluid);

/// Net outward advective flux of every cell. Each edge flux is evaluated
/// once and applied to both neighbours with opposite signs.
std::vector<double> advective_fluxes(const ScalarField& s, const EdgeField& v,
                                     const FluidModel& fluid, std::span<const double> inflow,
                                     BoundaryRates* rates = nullptr);

/// factor * phi_min * min(dx / (U_max L_f), dz / (W_max L_f)); infinite
/// for a motionless field.
double advective_time_step(const EdgeField& v, const TransportData& data, double factor);

/// Largest dt accepted by ve_step; dt above it raises CflViolation.
inline constexpr double kCflHardLimit = 0.5;

VeState ve_step(const VeState& state, const NonlocalVelocity& velocity, double dt,
                const TransportData& data, BoundaryRates* rates = nullptr);

RunResult run_ve(const Scenario& scenario);

/// The one-layer VE run: nz forced to 1, inflow and permeability averaged
/// vertically.
RunResult run_vi(const Scenario& scenario);

}  // namespace flatflow
