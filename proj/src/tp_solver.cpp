#include "flatflow/tp_solver.hpp"

#include <algorithm>

#include "flatflow/error.hpp"
#include "flatflow/ve_solver.hpp"
#include "stepping.hpp"

namespace flatflow {

PressureSystem assemble_pressure(const ScalarField& s, const ScalarField& kappa, double gamma,
                                 const FluidModel& fluid, std::span<const double> inflow) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const Grid& g = s.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  const double dx = g.dx();
  const double dz = g.dz();
  if (!inflow.empty() && static_cast<int>(inflow.size()) != nz) {
    throw DomainError("inflow profile needs one value per layer");
  }

  std::vector<double> mob(g.cell_count());
  for (std::size_t k = 0; k < mob.size(); ++k) {
    if (!(kappa[k] > 0.0)) throw DomainError("permeability must be positive");
    mob[k] = fluid.total_mobility_at(s[k]) * kappa[k];
  }

  PressureSystem sys{StencilMatrix(nx, nz),
                     std::vector<double>(g.cell_count(), 0.0),
                     std::vector<double>(nz),
                     std::vector<double>(nz),
                     std::vector<double>(static_cast<std::size_t>(std::max(nx - 1, 0)) * nz),
                     std::vector<double>(static_cast<std::size_t>(nx) * std::max(nz - 1, 0))};
  auto diag = sys.matrix.diagonal();
  auto east = sys.matrix.east();
  auto north = sys.matrix.north();

  const double cx = dz / dx;
  const double cz = dx / (dz * gamma * gamma);
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double t = cx * 0.5 * (mob[k] + mob[k + 1]);
      sys.x_trans[static_cast<std::size_t>(j) * (nx - 1) + i] = t;
      east[k] = -t;
      diag[k] += t;
      diag[k + 1] += t;
    }
  }
  for (int j = 0; j + 1 < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      const std::size_t up = g.index(i, j + 1);
      const double t = cz * 0.5 * (mob[k] + mob[up]);
      sys.z_trans[k] = t;
      north[k] = -t;
      diag[k] += t;
      diag[up] += t;
    }
  }
  for (int j = 0; j < nz; ++j) {
    const std::size_t first = g.index(0, j);
    const std::size_t last = g.index(nx - 1, j);
    const double m_in =
        inflow.empty() ? mob[first]
                       : 0.5 * (fluid.total_mobility_at(inflow[j]) * kappa[first] + mob[first]);
    const double t_in = 2.0 * cx * m_in;
    const double t_out = 2.0 * cx * mob[last];
    sys.inflow_transmissibility[j] = t_in;
    sys.outflow_transmissibility[j] = t_out;
    diag[first] += t_in;
    diag[last] += t_out;
    sys.rhs[first] += t_in * 1.0;
  }
  return sys;
}

CgStats solve_pressure(const PressureSystem& system, ScalarField& pressure, double tol) {
  CgOptions opt;
  opt.rel_tol = tol;
  opt.preconditioner = Preconditioner::TwoLevel;
  return cg_solve(system.matrix, system.rhs, pressure.values(), opt);
}

ScalarField solve_pressure(const PressureSystem& system, double tol) {
  const int nx = system.matrix.cols();
  const int nz = system.matrix.rows();
  ScalarField p(Grid(nx, nz));
  solve_pressure(system, p, tol);
  return p;
}

double darcy_velocities(const PressureSystem& sys, const ScalarField& p, EdgeField& v) {
  const Grid& g = p.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  const double dx = g.dx();
  const double dz = g.dz();

  double q = 0.0;
  for (int j = 0; j < nz; ++j) {
    v.u(0, j) = sys.inflow_transmissibility[j] * (1.0 - p(0, j)) / dz;
    q += v.u(0, j) * dz;
    for (int i = 1; i < nx; ++i) {
      const double t = sys.x_trans[static_cast<std::size_t>(j) * (nx - 1) + i - 1];
      v.u(i, j) = t * (p(i - 1, j) - p(i, j)) / dz;
    }
    v.u(nx, j) = sys.outflow_transmissibility[j] * p(nx - 1, j) / dz;
  }
  for (int i = 0; i < nx; ++i) {
    v.w(i, 0) = 0.0;
    v.w(i, nz) = 0.0;
  }
  for (int j = 0; j + 1 < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double t = sys.z_trans[g.index(i, j)];
      v.w(i, j + 1) = t * (p(i, j) - p(i, j + 1)) / dx;
    }
  }
  if (!(q > 0.0)) throw SolverError("pressure solution carries no inflow", 0, q);
  for (double& x : v.x_edges()) x /= q;
  for (double& x : v.z_edges()) x /= q;
  return q;
}

EdgeField darcy_velocities(const ScalarField& pressure, const ScalarField& s,
                           const ScalarField& kappa, double gamma, const FluidModel& fluid,
                           std::span<const double> inflow) {
  const auto sys = assemble_pressure(s, kappa, gamma, fluid, inflow);
  EdgeField v(s.grid());
  darcy_velocities(sys, pressure, v);
  return v;
}

namespace {

class TpStepper final : public detail::Stepper {
 public:
  TpStepper(const Setup& setup, const Scenario& sc)
      : kappa_(setup.kappa),
        data_(TransportData::from_setup(setup, sc.cfl_factor)),
        gamma_(sc.gamma),
        tol_(sc.pressure_tol),
        pressure_(setup.grid),
        velocity_{EdgeField(setup.grid), {}} {}

  double prepare(const ScalarField& s) override {
    const detail::Stopwatch sw;
    const auto sys = assemble_pressure(s, kappa_, gamma_, data_.fluid, data_.inflow);
    const auto cg = solve_pressure(sys, pressure_, tol_);
    stats.pressure_iterations += cg.iterations;
    stats.max_pressure_iterations = std::max(stats.max_pressure_iterations, cg.iterations);
    darcy_velocities(sys, pressure_, velocity_.edges);
    stats.max_divergence = std::max(stats.max_divergence, velocity_.edges.max_abs_divergence());
    timings.pressure += sw.seconds();
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
  double gamma_;
  double tol_;
  ScalarField pressure_;
  NonlocalVelocity velocity_;
};

}  // namespace

RunResult run_tp(const Scenario& scenario) {
  const Setup setup = make_setup(scenario);
  TpStepper stepper(setup, scenario);
  return detail::drive(scenario, setup, stepper);
}

}  // namespace flatflow
