#include "flatflow/multiscale_solver.hpp"

#include <algorithm>

#include "flatflow/error.hpp"
#include "flatflow/linalg.hpp"
#include "stepping.hpp"

namespace flatflow {

CoarsePressure coarse_pressure_solve(const ScalarField& s, const ScalarField& kappa,
                                     const FluidModel& fluid) {
  const Grid& g = s.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  const double dx = g.dx();

  CoarsePressure out{std::vector<double>(nx), std::vector<double>(nx, 0.0), 0.0};
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double k = kappa(i, j);
      if (!(k > 0.0)) throw DomainError("permeability must be positive");
      out.coefficient[i] += fluid.total_mobility_at(s(i, j)) * k;
    }
  }
  for (double& d : out.coefficient) d *= g.dz();
  const auto& d = out.coefficient;

  // Harmonic face transmissibilities; faces 0 and nx are the boundaries.
  std::vector<double> t(nx + 1);
  t[0] = 2.0 * d[0] / dx;
  t[nx] = 2.0 * d[nx - 1] / dx;
  for (int i = 1; i < nx; ++i) t[i] = 2.0 * d[i - 1] * d[i] / (dx * (d[i - 1] + d[i]));

  std::vector<double> lower(nx, 0.0), diag(nx), upper(nx, 0.0), rhs(nx, 0.0);
  for (int i = 0; i < nx; ++i) {
    diag[i] = t[i] + t[i + 1];
    if (i > 0) lower[i] = -t[i];
    if (i + 1 < nx) upper[i] = -t[i + 1];
  }
  rhs[0] = t[0];
  out.pressure = tridiag_solve(lower, diag, upper, rhs);
  out.rate = t[0] * (1.0 - out.pressure[0]);
  return out;
}

NonlocalVelocity multiscale_velocity(const ScalarField& s, const ScalarField& kappa,
                                     const FluidModel& fluid, const CoarsePressure& coarse,
                                     std::span<const double> inflow) {
  const Grid& g = s.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  const double dx = g.dx();
  const double q = coarse.rate;
  const auto& d = coarse.coefficient;
  if (!(q > 0.0)) throw SolverError("coarse pressure carries no inflow", 0, q);

  // Fine pressure (no vertical correction) and its face values; a face
  // pressure is the flux-continuous weighting of the two cell pressures.
  ScalarField fine(g);
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) fine(i, j) = coarse.pressure[i];
  }
  std::vector<double> cell_u(g.cell_count());
  for (int j = 0; j < nz; ++j) {
    double west = 1.0;
    for (int i = 0; i < nx; ++i) {
      const double east =
          i + 1 < nx ? (d[i] * fine(i, j) + d[i + 1] * fine(i + 1, j)) / (d[i] + d[i + 1]) : 0.0;
      const double grad = (east - west) / dx;
      cell_u[g.index(i, j)] = -fluid.total_mobility_at(s(i, j)) * kappa(i, j) * grad / q;
      west = east;
    }
  }

  NonlocalVelocity out{EdgeField(g), d};
  EdgeField& v = out.edges;
  for (int j = 0; j < nz; ++j) {
    for (int i = 1; i < nx; ++i) {
      v.u(i, j) = 0.5 * (cell_u[g.index(i - 1, j)] + cell_u[g.index(i, j)]);
    }
    v.u(nx, j) = cell_u[g.index(nx - 1, j)];
  }
  if (inflow.empty()) {
    for (int j = 0; j < nz; ++j) v.u(0, j) = cell_u[g.index(0, j)];
  } else {
    // Ghost column left of the inlet: same kappa as column 0, inflow
    // saturation, and the gradient that carries the same rate q.
    double d_ghost = 0.0;
    for (int j = 0; j < nz; ++j) d_ghost += fluid.total_mobility_at(inflow[j]) * kappa(0, j);
    d_ghost *= g.dz();
    const double grad = -q / d_ghost;
    for (int j = 0; j < nz; ++j) {
      const double ghost_u = -fluid.total_mobility_at(inflow[j]) * kappa(0, j) * grad / q;
      v.u(0, j) = 0.5 * (ghost_u + cell_u[g.index(0, j)]);
    }
  }
  telescope_vertical(v);
  return out;
}

MsState ms_step(const MsState& state, const ScalarField& kappa, double dt,
                const TransportData& data, BoundaryRates* rates) {
  const auto coarse = coarse_pressure_solve(state.saturation, kappa, data.fluid);
  const auto velocity =
      multiscale_velocity(state.saturation, kappa, data.fluid, coarse, data.inflow);
  VeState next = ve_step(VeState{state.saturation, state.time, 0}, velocity, dt, data, rates);
  return {std::move(next.saturation), coarse.pressure, next.time};
}

namespace {

class MsStepper final : public detail::Stepper {
 public:
  MsStepper(const Setup& setup, double cfl)
      : kappa_(setup.kappa),
        data_(TransportData::from_setup(setup, cfl)),
        velocity_{EdgeField(setup.grid), {}} {}

  double prepare(const ScalarField& s) override {
    detail::Stopwatch sw;
    const auto coarse = coarse_pressure_solve(s, kappa_, data_.fluid);
    timings.pressure += sw.seconds();
    const detail::Stopwatch sw2;
    velocity_ = multiscale_velocity(s, kappa_, data_.fluid, coarse, data_.inflow);
    stats.max_divergence = std::max(stats.max_divergence, velocity_.edges.max_abs_divergence());
    timings.transport += sw2.seconds();
    return advective_time_step(velocity_.edges, data_, data_.cfl_factor);
  }

  void advance(ScalarField& s, double dt, BoundaryRates& rates) override {
    const detail::Stopwatch sw;
    VeState next = ve_step(VeState{s, 0.0, 0}, velocity_, dt, data_, &rates);
    s = std::move(next.saturation);
    timings.transport += sw.seconds();
  }

 private:
  ScalarField kappa_;
  TransportData data_;
  NonlocalVelocity velocity_;
};

}  // namespace

RunResult run_multiscale(const Scenario& scenario) {
  const Setup setup = make_setup(scenario);
  MsStepper stepper(setup, scenario.cfl_factor);
  return detail::drive(scenario, setup, stepper);
}

}  // namespace flatflow
