#pragma once

#include <span>
#include <vector>

#include "flatflow/grid.hpp"
#include "flatflow/linalg.hpp"
#include "flatflow/physics.hpp"
#include "flatflow/run_result.hpp"
#include "flatflow/scenario.hpp"
#include "flatflow/ve_solver.hpp"

namespace flatflow {

/// I - (beta_x/hx^2) D_xx - (beta_z/hz^2) D_zz on a cols x rows lattice with
/// mirror closure in x and periodic closure in z.
StencilMatrix assemble_helmholtz(const BrinkmanParams& params, int cols, int rows, double hx,
                                 double hz);
StencilMatrix assemble_helmholtz(const BrinkmanParams& params, const Grid& grid);

/// S0_{i,j} = (1 - i dx)^2 S_in,j / (1e5 (i dx)^2 + (1 - i dx)^2).
ScalarField bve_initial_condition(std::span<const double> inflow, const Grid& grid);

/// Explicit nonlinear diffusion eps_x d/dx(H dS/dx) + eps_z d/dz(H dS/dz)
/// per cell (already divided by the cell area), zero flux on all walls.
std::vector<double> diffusion_terms(const ScalarField& s, const ScalarField& kappa,
                                    const BrinkmanParams& params, const FluidModel& fluid);

/// 0.25 * min(dx^2 / (eps_x H_max), dz^2 / (eps_z H_max)).
double diffusion_time_step(const Grid& grid, const BrinkmanParams& params,
                           const FluidModel& fluid, double kappa_max);

struct BrinkmanStepStats {
  int helmholtz_iterations = 0;
};

/// One IMEX step driven by the given edge velocities:
/// (I - beta Lap_h)(S^{n+1} - S^n) = dt * (advection + diffusion).
ScalarField brinkman_increment_step(const ScalarField& s, const EdgeField& velocity,
                                    const ScalarField& kappa, const StencilMatrix& helmholtz,
                                    const BrinkmanParams& params, double dt,
                                    const TransportData& data, double tol,
                                    BoundaryRates* rates = nullptr,
                                    BrinkmanStepStats* stats = nullptr);

/// BVE step: nonlocal VE velocity reconstructed from the state.
VeState bve_step(const VeState& state, const ScalarField& kappa, const BrinkmanParams& params,
                 double dt, const TransportData& data, double tol = 1e-12,
                 BoundaryRates* rates = nullptr);

/// Physical Brinkman velocity from the Darcy one, per component on its
/// own edge lattice: (I - beta_x D_xx - beta_z D_zz) v = V.
struct RecoveredVelocity {
  EdgeField v;
  int iterations = 0;
};
RecoveredVelocity recover_brinkman_velocity(const EdgeField& darcy, const BrinkmanParams& params,
                                            double tol, const EdgeField* guess = nullptr);

RunResult run_bve(const Scenario& scenario);
RunResult run_btp(const Scenario& scenario);

}  // namespace flatflow
