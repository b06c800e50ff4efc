#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flatflow/error.hpp"
#include "flatflow/multiscale_solver.hpp"
#include "oracle/oracles.hpp"

using namespace flatflow;

namespace {

ScalarField random_field(const Grid& g, unsigned seed, double lo, double hi) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  ScalarField f(g);
  for (double& v : f.values()) v = u(gen);
  return f;
}

TransportData transport(const Grid& g, double m, std::vector<double> inflow) {
  const FluidModel fluid(m);
  return {g, fluid, ScalarField(g, 1.0), std::move(inflow), fractional_flow_derivative_bound(fluid),
          0.45};
}

}  // namespace

TEST(MsCoarse, UniformDataGivesLinearPressure) {
  const Grid g(8, 3);
  const auto c = coarse_pressure_solve(ScalarField(g, 0.0), ScalarField(g, 2.0), FluidModel(4));
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(c.pressure[i], 1.0 - (i + 0.5) / 8.0, 1e-14);
    EXPECT_NEAR(c.coefficient[i], 2.0, 1e-14);
  }
  EXPECT_NEAR(c.rate, 2.0, 1e-13);
}

TEST(MsCoarse, LayeredSlopeByHand) {
  const Grid g(4, 2);
  ScalarField k(g, 1.0);
  for (int i = 0; i < 4; ++i) k(i, 0) = 0.5;
  const auto c = coarse_pressure_solve(ScalarField(g, 0.0), k, FluidModel(2));
  // D = dz * (0.5 + 1) = 0.75 in every column
  for (int i = 0; i + 1 < 4; ++i) {
    EXPECT_NEAR((c.pressure[i + 1] - c.pressure[i]) / 0.25, -c.rate / 0.75, 1e-13);
  }
  EXPECT_NEAR(c.rate, 0.75, 1e-14);
}

TEST(MsCoarse, CoefficientIsColumnQuadrature) {
  const Grid g(5, 4);
  const auto s = random_field(g, 21, 0.0, 1.0);
  const auto k = random_field(g, 22, 0.1, 3.0);
  const auto c = coarse_pressure_solve(s, k, FluidModel(5));
  for (int i = 0; i < 5; ++i) {
    double sum = 0;
    for (int j = 0; j < 4; ++j) sum += oracle::lam(s(i, j), 5.0) * k(i, j);
    EXPECT_NEAR(c.coefficient[i], 0.25 * sum, 1e-14);
  }
  // same rate through every interior face
  for (int i = 0; i + 1 < 5; ++i) {
    const double t = 2 * c.coefficient[i] * c.coefficient[i + 1] /
                     (0.2 * (c.coefficient[i] + c.coefficient[i + 1]));
    EXPECT_NEAR(t * (c.pressure[i] - c.pressure[i + 1]), c.rate, 1e-12);
  }
}

TEST(MsCoarse, RejectsZeroPermeability) {
  const Grid g(3, 2);
  ScalarField k(g, 1.0);
  k(1, 1) = 0.0;
  EXPECT_THROW(coarse_pressure_solve(ScalarField(g, 0.0), k, FluidModel(2)), DomainError);
}

TEST(MsVelocity, MatchesColumnWeightOracle) {
  const Grid g(7, 4);
  const auto s = random_field(g, 31, 0.0, 1.0);
  const auto k = random_field(g, 32, 0.2, 2.0);
  const std::vector<double> inflow{0.0, 0.9, 0.9, 0.1};
  const FluidModel fluid(5);
  const auto v = multiscale_velocity(s, k, fluid, coarse_pressure_solve(s, k, fluid), inflow);
  oracle::Problem p{7, 4, 5.0, {s.values().begin(), s.values().end()},
                    {k.values().begin(), k.values().end()}, {}, inflow};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i <= 7; ++i) EXPECT_NEAR(v.edges.u(i, j), oracle::u_edge(p, i, j), 1e-12);
  }
  for (int j = 0; j <= 4; ++j) {
    for (int i = 0; i < 7; ++i) EXPECT_NEAR(v.edges.w(i, j), oracle::w_edge(p, i, j), 1e-11);
  }
  EXPECT_LE(v.edges.max_abs_divergence(), 1e-13);
}

TEST(MsStep, AgreesWithVeStep) {
  const Grid g(8, 4);
  const auto k = random_field(g, 41, 0.3, 2.0);
  const std::vector<double> inflow{0.0, 0.9, 0.9, 0.0};
  const auto data = transport(g, 5, inflow);
  MsState ms{random_field(g, 42, 0.0, 0.9), {}, 0.0};
  VeState ve{ms.saturation, 0.0, 0};
  for (int n = 0; n < 5; ++n) {
    const auto vel = reconstruct_velocity(ve.saturation, k, data.fluid, inflow);
    const double dt = advective_time_step(vel.edges, data, 0.45);
    ve = ve_step(ve, vel, dt, data);
    ms = ms_step(ms, k, dt, data);
  }
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    EXPECT_NEAR(ms.saturation[c], ve.saturation[c], 1e-10);
  }
  EXPECT_EQ(ms.coarse_pressure.size(), 8u);
}

TEST(MsRun, ZeroEndTimeAndMassBalance) {
  Scenario sc;
  sc.model = ModelKind::MS;
  sc.nx = 40;
  sc.nz = 20;
  sc.viscosity_ratio = 5;
  sc.inflow.pieces = {{0.4, 0.6, 0.9}};
  const auto idle = run_multiscale(sc);
  EXPECT_EQ(idle.stats.steps, 0);
  sc.end_time = 0.3;
  const auto r = run_multiscale(sc);
  EXPECT_GT(r.stats.steps, 0);
  EXPECT_LE(std::abs(r.ledger.relative_imbalance()), 1e-12);
  EXPECT_LE(r.stats.max_divergence, 1e-13);
}
