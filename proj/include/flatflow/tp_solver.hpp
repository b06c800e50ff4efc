#pragma once

#include "flatflow/grid.hpp"
#include "flatflow/linalg.hpp"
#include "flatflow/physics.hpp"
#include "flatflow/run_result.hpp"
#include "flatflow/scenario.hpp"

namespace flatflow {

/// Two-point-flux discretization of div(lambda kappa grad_gamma p) = 0 with
/// p = 1 on the inflow side, p = 0 on the outflow side and closed top and
/// bottom. The Dirichlet data enter through half-cell boundary
/// transmissibilities, so every cell stays an unknown.
struct PressureSystem {
  StencilMatrix matrix;
  std::vector<double> rhs;
  /// Half-cell transmissibilities of the inflow (x = 0) and outflow (x = 1)
  /// boundary faces, per layer.
  std::vector<double> inflow_transmissibility;
  std::vector<double> outflow_transmissibility;
  /// Interior transmissibilities: x_trans[j*(nx-1)+i] couples (i, j) and
  /// (i+1, j); z_trans[j*nx+i] couples (i, j) and (i, j+1).
  std::vector<double> x_trans;
  std::vector<double> z_trans;
};

struct TpState {
  ScalarField saturation;
  ScalarField pressure;
  double time = 0.0;
};

PressureSystem assemble_pressure(const ScalarField& s, const ScalarField& kappa, double gamma,
                                 const FluidModel& fluid, std::span<const double> inflow = {});

/// Solves in place; `pressure` is the initial guess on entry.
CgStats solve_pressure(const PressureSystem& system, ScalarField& pressure, double tol);
ScalarField solve_pressure(const PressureSystem& system, double tol);

/// Edge velocities u and w/gamma from the pressure, divided by the total
/// inflow rate q so that the injected flux is 1. Returns q.
double darcy_velocities(const PressureSystem& system, const ScalarField& pressure,
                        EdgeField& out);

/// Same, with the transmissibilities assembled from s.
EdgeField darcy_velocities(const ScalarField& pressure, const ScalarField& s,
                           const ScalarField& kappa, double gamma, const FluidModel& fluid,
                           std::span<const double> inflow = {});

RunResult run_tp(const Scenario& scenario);

}  // namespace flatflow
