#include "flatflow/ve_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flatflow/error.hpp"
#include "stepping.hpp"

namespace flatflow {

TransportData TransportData::from_setup(const Setup& setup, double cfl_factor) {
  return {setup.grid,  setup.fluid, setup.porosity, setup.inflow,
          fractional_flow_derivative_bound(setup.fluid), cfl_factor};
}

namespace {

void check_kappa(const ScalarField& kappa) {
  for (double k : kappa.values()) {
    if (!(k > 0.0)) throw DomainError("permeability must be positive");
  }
}

}  // namespace

void telescope_vertical(EdgeField& v) {
  const Grid& g = v.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  const double ratio = g.dz() / g.dx();
  for (int i = 0; i < nx; ++i) {
    double w = 0.0;
    v.w(i, 0) = 0.0;
    for (int j = 0; j + 1 < nz; ++j) {
      w -= ratio * (v.u(i + 1, j) - v.u(i, j));
      v.w(i, j + 1) = w;
    }
    v.w(i, nz) = 0.0;
  }
}

NonlocalVelocity reconstruct_velocity(const ScalarField& s, const ScalarField& kappa,
                                      const FluidModel& fluid, std::span<const double> inflow) {
  const Grid& g = s.grid();
  check_kappa(kappa);
  const int nx = g.nx();
  const int nz = g.nz();
  const double dz = g.dz();
  if (!inflow.empty() && static_cast<int>(inflow.size()) != nz) {
    throw DomainError("inflow profile needs one value per layer");
  }

  NonlocalVelocity out{EdgeField(g), std::vector<double>(nx, 0.0)};
  std::vector<double> c(g.cell_count());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = fluid.total_mobility_at(s[k]) * kappa[k];
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) out.column_denominators[i] += c[g.index(i, j)];
  }
  for (int i = 0; i < nx; ++i) out.column_denominators[i] *= dz;
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) c[g.index(i, j)] /= out.column_denominators[i];
  }

  EdgeField& v = out.edges;
  for (int j = 0; j < nz; ++j) {
    for (int i = 1; i < nx; ++i) v.u(i, j) = 0.5 * (c[g.index(i - 1, j)] + c[g.index(i, j)]);
    v.u(nx, j) = c[g.index(nx - 1, j)];
  }
  if (inflow.empty()) {
    for (int j = 0; j < nz; ++j) v.u(0, j) = c[g.index(0, j)];
  } else {
    std::vector<double> ghost(nz);
    double column = 0.0;
    for (int j = 0; j < nz; ++j) {
      ghost[j] = fluid.total_mobility_at(inflow[j]) * kappa(0, j);
      column += ghost[j];
    }
    column *= dz;
    for (int j = 0; j < nz; ++j) v.u(0, j) = 0.5 * (ghost[j] / column + c[g.index(0, j)]);
  }
  telescope_vertical(v);
  return out;
}

double upwind_flux(double v, double s_inside, double s_outside, double edge_length,
                   const FluidModel& fluid) {
  return edge_length * (std::max(v, 0.0) * fluid.fractional_flow_at(s_inside) +
                        std::min(v, 0.0) * fluid.fractional_flow_at(s_outside));
}

std::vector<double> advective_fluxes(const ScalarField& s, const EdgeField& v,
                                     const FluidModel& fluid, std::span<const double> inflow,
                                     BoundaryRates* rates) {
  const Grid& g = s.grid();
  const int nx = g.nx();
  const int nz = g.nz();
  const double dx = g.dx();
  const double dz = g.dz();
  std::vector<double> out(g.cell_count(), 0.0);
  double injected = 0.0;
  double escaped = 0.0;

  for (int j = 0; j < nz; ++j) {
    const std::size_t row = g.index(0, j);
    const double ghost = inflow.empty() ? 0.0 : inflow[j];
    // Flux from the ghost column into cell 0 (positive = into the domain).
    const double f_in = upwind_flux(v.u(0, j), ghost, s[row], dz, fluid);
    out[row] -= f_in;
    injected += f_in;
    for (int i = 1; i < nx; ++i) {
      const double f = upwind_flux(v.u(i, j), s[row + i - 1], s[row + i], dz, fluid);
      out[row + i - 1] += f;
      out[row + i] -= f;
    }
    const double f_out = upwind_flux(v.u(nx, j), s[row + nx - 1], 0.0, dz, fluid);
    out[row + nx - 1] += f_out;
    escaped += f_out;
  }
  for (int j = 1; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t below = g.index(i, j - 1);
      const std::size_t above = g.index(i, j);
      const double f = upwind_flux(v.w(i, j), s[below], s[above], dx, fluid);
      out[below] += f;
      out[above] -= f;
    }
  }
  if (rates) {
    rates->injected = injected;
    rates->escaped = escaped;
  }
  return out;
}

double advective_time_step(const EdgeField& v, const TransportData& data, double factor) {
  const Grid& g = v.grid();
  const double phi_min = *std::min_element(data.porosity.values().begin(),
                                           data.porosity.values().end());
  const double um = v.max_abs_u() * data.slope_bound;
  const double wm = v.max_abs_w() * data.slope_bound;
  double limit = std::numeric_limits<double>::infinity();
  if (um > 0.0) limit = std::min(limit, g.dx() / um);
  if (wm > 0.0) limit = std::min(limit, g.dz() / wm);
  return factor * phi_min * limit;
}

VeState ve_step(const VeState& state, const NonlocalVelocity& velocity, double dt,
                const TransportData& data, BoundaryRates* rates) {
  const double limit = advective_time_step(velocity.edges, data, kCflHardLimit);
  if (!(dt > 0.0) || dt > limit) throw CflViolation(dt, limit);

  const Grid& g = state.saturation.grid();
  const auto flux = advective_fluxes(state.saturation, velocity.edges, data.fluid, data.inflow,
                                     rates);
  VeState next{state.saturation, state.time + dt, state.step_count + 1};
  const double scale = dt / (g.dx() * g.dz());
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    next.saturation[k] -= scale * flux[k] / data.porosity[k];
  }
  return next;
}

namespace {

class VeStepper final : public detail::Stepper {
 public:
  VeStepper(const Setup& setup, double cfl)
      : kappa_(setup.kappa),
        data_(TransportData::from_setup(setup, cfl)),
        velocity_{EdgeField(setup.grid), {}} {}

  double prepare(const ScalarField& s) override {
    const detail::Stopwatch sw;
    velocity_ = reconstruct_velocity(s, kappa_, data_.fluid, data_.inflow);
    stats.max_divergence = std::max(stats.max_divergence, velocity_.edges.max_abs_divergence());
    timings.transport += sw.seconds();
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

RunResult run_ve(const Scenario& scenario) {
  const Setup setup = make_setup(scenario);
  VeStepper stepper(setup, scenario.cfl_factor);
  return detail::drive(scenario, setup, stepper);
}

RunResult run_vi(const Scenario& scenario) {
  Scenario one_layer = scenario;
  one_layer.model = ModelKind::VI;
  one_layer.nz = 1;
  const Setup setup = make_setup(one_layer);
  VeStepper stepper(setup, one_layer.cfl_factor);
  return detail::drive(one_layer, setup, stepper);
}

}  // namespace flatflow
