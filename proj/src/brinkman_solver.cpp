#include "flatflow/brinkman_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flatflow/error.hpp"
#include "flatflow/tp_solver.hpp"
#include "stepping.hpp"

namespace flatflow {

StencilMatrix assemble_helmholtz(const BrinkmanParams& params, int cols, int rows, double hx,
                                 double hz) {
  if (params.beta_x < 0.0 || params.beta_z < 0.0) {
    throw DomainError("Brinkman coefficients must be nonnegative");
  }
  StencilMatrix a(cols, rows, true);
  auto diag = a.diagonal();
  auto east = a.east();
  auto north = a.north();
  std::fill(diag.begin(), diag.end(), 1.0);
  const double bx = params.beta_x / (hx * hx);
  const double bz = params.beta_z / (hz * hz);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i + 1 < cols; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * cols + i;
      east[k] = -bx;
      diag[k] += bx;
      diag[k + 1] += bx;
    }
  }
  // A single row is its own periodic neighbour and carries no z-coupling.
  if (rows > 1 && bz > 0.0) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      north[k] = -bz;
      diag[k] += 2.0 * bz;
    }
  }
  return a;
}

StencilMatrix assemble_helmholtz(const BrinkmanParams& params, const Grid& grid) {
  return assemble_helmholtz(params, grid.nx(), grid.nz(), grid.dx(), grid.dz());
}

ScalarField bve_initial_condition(std::span<const double> inflow, const Grid& grid) {
  if (static_cast<int>(inflow.size()) != grid.nz()) {
    throw DomainError("inflow profile needs one value per layer");
  }
  ScalarField s(grid);
  for (int i = 0; i < grid.nx(); ++i) {
    const double x = i * grid.dx();
    const double a = (1.0 - x) * (1.0 - x);
    const double weight = a / (1e5 * x * x + a);
    for (int j = 0; j < grid.nz(); ++j) s(i, j) = weight * inflow[j];
  }
  return s;
}

std::vector<double> diffusion_terms(const ScalarField& s, const ScalarField& kappa,
                                    const BrinkmanParams& params, const FluidModel& fluid) {
  const Grid& g = s.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  std::vector<double> out(g.cell_count(), 0.0);
  const double cx = params.eps_x / (g.dx() * g.dx());
  const double cz = params.eps_z / (g.dz() * g.dz());
  if (cx > 0.0) {
    for (int j = 0; j < nz; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        const std::size_t k = g.index(i, j);
        const double h =
            fluid.diffusion_at(0.5 * (s[k] + s[k + 1]), 0.5 * (kappa[k] + kappa[k + 1]));
        const double f = cx * h * (s[k + 1] - s[k]);
        out[k] += f;
        out[k + 1] -= f;
      }
    }
  }
  if (cz > 0.0) {
    for (int j = 0; j + 1 < nz; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t k = g.index(i, j);
        const std::size_t up = g.index(i, j + 1);
        const double h =
            fluid.diffusion_at(0.5 * (s[k] + s[up]), 0.5 * (kappa[k] + kappa[up]));
        const double f = cz * h * (s[up] - s[k]);
        out[k] += f;
        out[up] -= f;
      }
    }
  }
  return out;
}

double diffusion_time_step(const Grid& grid, const BrinkmanParams& params,
                           const FluidModel& fluid, double kappa_max) {
  const double h = diffusion_bound(fluid) * kappa_max;
  double limit = std::numeric_limits<double>::infinity();
  if (params.eps_x > 0.0) limit = std::min(limit, grid.dx() * grid.dx() / (params.eps_x * h));
  if (params.eps_z > 0.0) limit = std::min(limit, grid.dz() * grid.dz() / (params.eps_z * h));
  return 0.25 * limit;
}

ScalarField brinkman_increment_step(const ScalarField& s, const EdgeField& velocity,
                                    const ScalarField& kappa, const StencilMatrix& helmholtz,
                                    const BrinkmanParams& params, double dt,
                                    const TransportData& data, double tol, BoundaryRates* rates,
                                    BrinkmanStepStats* stats) {
  const Grid& g = s.grid();
  const double adv_limit = advective_time_step(velocity, data, kCflHardLimit);
  const double kappa_max = *std::max_element(kappa.values().begin(), kappa.values().end());
  const double limit = std::min(adv_limit, diffusion_time_step(g, params, data.fluid, kappa_max));
  if (!(dt > 0.0) || dt > limit) throw CflViolation(dt, limit);

  const auto adv = advective_fluxes(s, velocity, data.fluid, data.inflow, rates);
  const auto diff = diffusion_terms(s, kappa, params, data.fluid);
  const double area = g.dx() * g.dz();
  std::vector<double> rhs(g.cell_count());
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    rhs[k] = dt * (diff[k] - adv[k] / area) / data.porosity[k];
  }
  std::vector<double> delta(g.cell_count(), 0.0);
  CgOptions opt;
  opt.rel_tol = tol;
  opt.preconditioner = Preconditioner::Line;
  const auto cg = cg_solve(helmholtz, rhs, delta, opt);
  if (stats) stats->helmholtz_iterations = cg.iterations;

  ScalarField next = s;
  for (std::size_t k = 0; k < delta.size(); ++k) next[k] += delta[k];
  return next;
}

VeState bve_step(const VeState& state, const ScalarField& kappa, const BrinkmanParams& params,
                 double dt, const TransportData& data, double tol, BoundaryRates* rates) {
  const auto velocity = reconstruct_velocity(state.saturation, kappa, data.fluid, data.inflow);
  const auto helmholtz = assemble_helmholtz(params, state.saturation.grid());
  return {brinkman_increment_step(state.saturation, velocity.edges, kappa, helmholtz, params, dt,
                                  data, tol, rates),
          state.time + dt, state.step_count + 1};
}

RecoveredVelocity recover_brinkman_velocity(const EdgeField& darcy, const BrinkmanParams& params,
                                            double tol, const EdgeField* guess) {
  const Grid& g = darcy.grid();
  RecoveredVelocity out{guess ? *guess : darcy, 0};
  CgOptions opt;
  opt.rel_tol = tol;
  opt.preconditioner = Preconditioner::Line;
  const auto ax = assemble_helmholtz(params, g.nx() + 1, g.nz(), g.dx(), g.dz());
  out.iterations += cg_solve(ax, darcy.x_edges(), out.v.x_edges(), opt).iterations;
  const auto az = assemble_helmholtz(params, g.nx(), g.nz() + 1, g.dx(), g.dz());
  out.iterations += cg_solve(az, darcy.z_edges(), out.v.z_edges(), opt).iterations;
  return out;
}

namespace {

double kappa_max_of(const ScalarField& kappa) {
  return *std::max_element(kappa.values().begin(), kappa.values().end());
}

class BveStepper final : public detail::Stepper {
 public:
  BveStepper(const Setup& setup, const Scenario& sc)
      : kappa_(setup.kappa),
        data_(TransportData::from_setup(setup, sc.cfl_factor)),
        params_(brinkman_params(sc)),
        helmholtz_(assemble_helmholtz(params_, setup.grid)),
        diffusion_dt_(sc.cfl_factor / kCflHardLimit *
                      diffusion_time_step(setup.grid, params_, setup.fluid, kappa_max_of(setup.kappa))),
        tol_(sc.helmholtz_tol),
        velocity_{EdgeField(setup.grid), {}} {}

  double prepare(const ScalarField& s) override {
    const detail::Stopwatch sw;
    velocity_ = reconstruct_velocity(s, kappa_, data_.fluid, data_.inflow);
    stats.max_divergence = std::max(stats.max_divergence, velocity_.edges.max_abs_divergence());
    timings.transport += sw.seconds();
    return std::min(advective_time_step(velocity_.edges, data_, data_.cfl_factor), diffusion_dt_);
  }

  void advance(ScalarField& s, double dt, BoundaryRates& rates) override {
    const detail::Stopwatch sw;
    BrinkmanStepStats st;
    s = brinkman_increment_step(s, velocity_.edges, kappa_, helmholtz_, params_, dt, data_, tol_,
                                &rates, &st);
    stats.helmholtz_iterations += st.helmholtz_iterations;
    timings.helmholtz += sw.seconds();
  }

 private:
  ScalarField kappa_;
  TransportData data_;
  BrinkmanParams params_;
  StencilMatrix helmholtz_;
  double diffusion_dt_;
  double tol_;
  NonlocalVelocity velocity_;
};

class BtpStepper final : public detail::Stepper {
 public:
  BtpStepper(const Setup& setup, const Scenario& sc)
      : kappa_(setup.kappa),
        data_(TransportData::from_setup(setup, sc.cfl_factor)),
        params_(brinkman_params(sc)),
        helmholtz_(assemble_helmholtz(params_, setup.grid)),
        diffusion_dt_(sc.cfl_factor / kCflHardLimit *
                      diffusion_time_step(setup.grid, params_, setup.fluid, kappa_max_of(setup.kappa))),
        gamma_(sc.gamma),
        pressure_tol_(sc.pressure_tol),
        helmholtz_tol_(sc.helmholtz_tol),
        recover_(sc.recover_velocity),
        pressure_(setup.grid),
        darcy_(setup.grid),
        physical_(setup.grid) {}

  double prepare(const ScalarField& s) override {
    const detail::Stopwatch sw;
    const auto sys = assemble_pressure(s, kappa_, gamma_, data_.fluid, data_.inflow);
    const auto cg = solve_pressure(sys, pressure_, pressure_tol_);
    stats.pressure_iterations += cg.iterations;
    stats.max_pressure_iterations = std::max(stats.max_pressure_iterations, cg.iterations);
    darcy_velocities(sys, pressure_, darcy_);
    stats.max_divergence = std::max(stats.max_divergence, darcy_.max_abs_divergence());
    timings.pressure += sw.seconds();
    if (recover_) {
      const detail::Stopwatch sh;
      auto rec = recover_brinkman_velocity(darcy_, params_, helmholtz_tol_, &physical_);
      physical_ = std::move(rec.v);
      stats.helmholtz_iterations += rec.iterations;
      timings.helmholtz += sh.seconds();
    }
    return std::min(advective_time_step(darcy_, data_, data_.cfl_factor), diffusion_dt_);
  }

  void advance(ScalarField& s, double dt, BoundaryRates& rates) override {
    const detail::Stopwatch sw;
    BrinkmanStepStats st;
    s = brinkman_increment_step(s, darcy_, kappa_, helmholtz_, params_, dt, data_,
                                helmholtz_tol_, &rates, &st);
    stats.helmholtz_iterations += st.helmholtz_iterations;
    timings.helmholtz += sw.seconds();
  }

  const EdgeField& physical_velocity() const noexcept { return physical_; }

 private:
  ScalarField kappa_;
  TransportData data_;
  BrinkmanParams params_;
  StencilMatrix helmholtz_;
  double diffusion_dt_;
  double gamma_;
  double pressure_tol_;
  double helmholtz_tol_;
  bool recover_;
  ScalarField pressure_;
  EdgeField darcy_;
  EdgeField physical_;
};

}  // namespace

RunResult run_bve(const Scenario& scenario) {
  const Setup setup = make_setup(scenario);
  BveStepper stepper(setup, scenario);
  return detail::drive(scenario, setup, stepper);
}

RunResult run_btp(const Scenario& scenario) {
  const Setup setup = make_setup(scenario);
  BtpStepper stepper(setup, scenario);
  return detail::drive(scenario, setup, stepper);
}

}  // namespace flatflow
