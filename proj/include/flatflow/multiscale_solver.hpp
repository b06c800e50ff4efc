#pragma once

#include <vector>

#include "flatflow/grid.hpp"
#include "flatflow/physics.hpp"
#include "flatflow/run_result.hpp"
#include "flatflow/scenario.hpp"
#include "flatflow/ve_solver.hpp"

namespace flatflow {

struct MsState {
  ScalarField saturation;
  std::vector<double> coarse_pressure;
  double time = 0.0;
};

/// Solution of the 1-D coarse problem -d/dx(D dp/dx) = 0 with p = 1 at
/// x = 0 and p = 0 at x = 1, D_i = dz * sum_m lambda kappa over column i.
struct CoarsePressure {
  std::vector<double> pressure;     ///< cell values, length nx
  std::vector<double> coefficient;  ///< D_i
  double rate = 0.0;                ///< q = -D dp/dx, constant along x
};

CoarsePressure coarse_pressure_solve(const ScalarField& s, const ScalarField& kappa,
                                     const FluidModel& fluid);

/// Fine-scale velocities from the coarse pressure: p(x, z) = p_hat(x),
/// u = -lambda kappa dp/dx / q per cell, averaged onto the x-edges, and w by
/// vertical telescoping. The inflow edge uses a ghost column carrying the
/// inflow saturation.
NonlocalVelocity multiscale_velocity(const ScalarField& s, const ScalarField& kappa,
                                     const FluidModel& fluid, const CoarsePressure& coarse,
                                     std::span<const double> inflow = {});

MsState ms_step(const MsState& state, const ScalarField& kappa, double dt,
                const TransportData& data, BoundaryRates* rates = nullptr);

RunResult run_multiscale(const Scenario& scenario);

}  // namespace flatflow
