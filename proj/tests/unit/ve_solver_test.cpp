#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flatflow/analysis.hpp"
#include "flatflow/error.hpp"
#include "flatflow/ve_solver.hpp"
#include "oracle/oracles.hpp"

using namespace flatflow;

namespace {

TransportData transport(const Grid& g, double m, std::vector<double> inflow, double cfl = 0.45) {
  const FluidModel fluid(m);
  return {g, fluid, ScalarField(g, 1.0), std::move(inflow), fractional_flow_derivative_bound(fluid),
          cfl};
}

ScalarField layered_kappa(int nx) {
  const Grid g(nx, 2);
  ScalarField k(g, 1.0);
  for (int i = 0; i < nx; ++i) k(i, 0) = 0.5;
  return k;
}

Scenario band_scenario(int nx, int nz, double t) {
  Scenario sc;
  sc.model = ModelKind::VE;
  sc.nx = nx;
  sc.nz = nz;
  sc.viscosity_ratio = 5;
  sc.end_time = t;
  sc.inflow.pieces = {{0.4, 0.6, 0.9}};
  return sc;
}

oracle::Problem to_problem(const ScalarField& s, const ScalarField& kappa, double m,
                           const std::vector<double>& inflow) {
  oracle::Problem p;
  p.nx = s.grid().nx();
  p.nz = s.grid().nz();
  p.m = m;
  p.s.assign(s.values().begin(), s.values().end());
  p.kappa.assign(kappa.values().begin(), kappa.values().end());
  p.inflow = inflow;
  return p;
}

ScalarField random_field(const Grid& g, unsigned seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  ScalarField f(g);
  for (double& v : f.values()) v = u(gen);
  return f;
}

}  // namespace

TEST(VeVelocity, UniformDataGivesUnitHorizontalFlow) {
  const Grid g(6, 4);
  const auto v = reconstruct_velocity(ScalarField(g, 0.3), ScalarField(g, 2.0), FluidModel(5),
                                      std::vector<double>(4, 0.3));
  for (double u : v.edges.x_edges()) EXPECT_NEAR(u, 1.0, 1e-15);
  for (double w : v.edges.z_edges()) EXPECT_NEAR(w, 0.0, 1e-15);
}

TEST(VeVelocity, SingleLayerIsAlwaysUnit) {
  const Grid g(9, 1);
  const auto s = random_field(g, 1);
  const auto k = random_field(g, 2, 0.1, 2.0);
  const auto v = reconstruct_velocity(s, k, FluidModel(3), std::vector<double>{0.7});
  for (double u : v.edges.x_edges()) EXPECT_NEAR(u, 1.0, 1e-15);
  for (double w : v.edges.z_edges()) EXPECT_EQ(w, 0.0);
}

TEST(VeVelocity, TwoLayerPermeabilityByHand) {
  // denominator dz * (0.5 + 1) = 0.75
  const auto k = layered_kappa(4);
  const auto v = reconstruct_velocity(ScalarField(k.grid(), 0.0), k, FluidModel(2),
                                      std::vector<double>{0.0, 0.0});
  for (int i = 1; i < 4; ++i) {
    EXPECT_NEAR(v.edges.u(i, 0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(v.edges.u(i, 1), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(v.edges.w(i, 1), 0.0, 1e-15);
  }
  for (double d : v.column_denominators) EXPECT_NEAR(d, 0.75, 1e-15);
}

TEST(VeVelocity, MatchesOracleEdgeByEdge) {
  const Grid g(7, 5);
  const auto s = random_field(g, 3);
  const auto k = random_field(g, 4, 0.2, 3.0);
  const std::vector<double> inflow = {0.0, 0.9, 0.9, 0.2, 0.0};
  const auto v = reconstruct_velocity(s, k, FluidModel(2), inflow);
  const auto p = to_problem(s, k, 2, inflow);
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i <= 7; ++i) EXPECT_NEAR(v.edges.u(i, j), oracle::u_edge(p, i, j), 1e-14);
  }
  for (int j = 0; j <= 5; ++j) {
    for (int i = 0; i < 7; ++i) EXPECT_NEAR(v.edges.w(i, j), oracle::w_edge(p, i, j), 1e-13);
  }
}

TEST(VeVelocity, DiscreteIncompressibilityAndWalls) {
  const Grid g(30, 12);
  const auto v = reconstruct_velocity(random_field(g, 5), random_field(g, 6, 0.1, 5.0),
                                      FluidModel(5), std::vector<double>(12, 0.4));
  EXPECT_LE(v.edges.max_abs_divergence(), 1e-13);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(v.edges.w(i, 0), 0.0);
    EXPECT_EQ(v.edges.w(i, 12), 0.0);
  }
  for (double d : v.column_denominators) EXPECT_GT(d, 0.0);
}

TEST(VeVelocity, RejectsNonpositivePermeability) {
  const Grid g(2, 2);
  EXPECT_THROW(reconstruct_velocity(ScalarField(g), ScalarField(g, 0.0), FluidModel(2)),
               DomainError);
}

TEST(UpwindFlux, Values) {
  const FluidModel m2(2);
  EXPECT_EQ(upwind_flux(0.0, 0.3, 0.9, 0.1, m2), 0.0);
  EXPECT_NEAR(upwind_flux(1.0, 1.0, 0.0, 0.25, m2), 0.25, 1e-16);
  const double expect = 0.01 * -0.5 * (2 * 0.64) / (2 * 0.64 + 0.04);
  EXPECT_NEAR(upwind_flux(-0.5, 0.3, 0.8, 0.01, m2), expect, 1e-16);
  EXPECT_NEAR(expect, -0.0048485, 1e-7);
}

TEST(UpwindFlux, AntisymmetricAcrossEveryEdge) {
  const FluidModel fm(5);
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(-2, 2), s(0, 1);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(gen), a = s(gen), b = s(gen);
    EXPECT_EQ(upwind_flux(v, a, b, 0.3, fm), -upwind_flux(-v, b, a, 0.3, fm));
  }
}

TEST(VeStep, UniformStateWithMatchingInflowIsStationary) {
  const Grid g(8, 4);
  const auto data = transport(g, 5, std::vector<double>(4, 0.6));
  const VeState st{ScalarField(g, 0.6), 0.0, 0};
  const auto v = reconstruct_velocity(st.saturation, ScalarField(g, 1.0), data.fluid, data.inflow);
  const double dt = advective_time_step(v.edges, data, 0.45);
  const auto next = ve_step(st, v, dt, data);
  for (double s : next.saturation.values()) EXPECT_NEAR(s, 0.6, 1e-15);
  EXPECT_EQ(next.step_count, 1);
  EXPECT_DOUBLE_EQ(next.time, dt);
}

TEST(VeStep, EmptyDomainWithoutInjectionStaysEmpty) {
  const Grid g(5, 3);
  const auto data = transport(g, 2, std::vector<double>(3, 0.0));
  const VeState st{ScalarField(g, 0.0), 0.0, 0};
  const auto v = reconstruct_velocity(st.saturation, ScalarField(g, 1.0), data.fluid, data.inflow);
  const auto next = ve_step(st, v, 0.01, data);
  for (double s : next.saturation.values()) EXPECT_EQ(s, 0.0);
}

TEST(VeStep, LayeredFourByTwoAgainstOracle) {
  const auto k = layered_kappa(4);
  const Grid& g = k.grid();
  const std::vector<double> inflow = {1.0, 1.0};
  const auto data = transport(g, 2, inflow);
  VeState st{ScalarField(g, 0.0), 0.0, 0};
  auto p = to_problem(st.saturation, k, 2, inflow);
  for (int n = 0; n < 3; ++n) {
    const auto v = reconstruct_velocity(st.saturation, k, data.fluid, data.inflow);
    const double dt = advective_time_step(v.edges, data, 0.45);
    st = ve_step(st, v, dt, data);
    p.s = oracle::ve_step(p, dt);
    for (std::size_t c = 0; c < p.s.size(); ++c) EXPECT_NEAR(st.saturation[c], p.s[c], 1e-14);
  }
}

TEST(VeStep, RandomEightByFourAgainstOracle) {
  const Grid g(8, 4);
  const auto k = random_field(g, 9, 0.3, 2.0);
  const std::vector<double> inflow = {0.2, 0.9, 0.5, 0.0};
  const auto data = transport(g, 5, inflow);
  VeState st{random_field(g, 10), 0.0, 0};
  auto p = to_problem(st.saturation, k, 5, inflow);
  for (int n = 0; n < 3; ++n) {
    const auto v = reconstruct_velocity(st.saturation, k, data.fluid, data.inflow);
    const double dt = advective_time_step(v.edges, data, 0.45);
    st = ve_step(st, v, dt, data);
    p.s = oracle::ve_step(p, dt);
    for (std::size_t c = 0; c < p.s.size(); ++c) EXPECT_NEAR(st.saturation[c], p.s[c], 1e-14);
  }
}

TEST(VeStep, PorosityDividesTheUpdate) {
  const Grid g(4, 2);
  auto data = transport(g, 2, {1.0, 0.0});
  const VeState st{ScalarField(g, 0.0), 0.0, 0};
  const auto v = reconstruct_velocity(st.saturation, ScalarField(g, 1.0), data.fluid, data.inflow);
  const auto unit = ve_step(st, v, 0.01, data);
  data.porosity = ScalarField(g, 0.5);
  const auto half = ve_step(st, v, 0.01, data);
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    EXPECT_NEAR(half.saturation[k], 2 * unit.saturation[k], 1e-15);
  }
}

TEST(VeStep, RejectsTimeStepAboveHardLimit) {
  const Grid g(10, 2);
  const auto data = transport(g, 2, {1.0, 1.0});
  const VeState st{ScalarField(g, 0.0), 0.0, 0};
  const auto v = reconstruct_velocity(st.saturation, ScalarField(g, 1.0), data.fluid, data.inflow);
  const double limit = advective_time_step(v.edges, data, kCflHardLimit);
  EXPECT_NO_THROW(ve_step(st, v, limit, data));
  EXPECT_THROW(ve_step(st, v, 1.01 * limit, data), CflViolation);
  EXPECT_THROW(ve_step(st, v, 0.0, data), CflViolation);
}

TEST(VeRun, ZeroEndTimeReturnsInitialField) {
  const auto r = run_ve(band_scenario(10, 10, 0.0));
  EXPECT_EQ(r.stats.steps, 0);
  for (double s : r.final_field.values()) EXPECT_EQ(s, 0.0);
}

TEST(VeRun, BandStaysOffOutflowAndConservesMass) {
  const auto r = run_ve(band_scenario(200, 200, 0.3));
  for (int j = 0; j < 200; ++j) EXPECT_EQ(r.final_field(199, j), 0.0);
  EXPECT_EQ(r.ledger.escaped, 0.0);
  EXPECT_GT(r.ledger.injected, 0.0);
  EXPECT_LE(r.ledger.relative_imbalance(), 1e-12);
  EXPECT_LE(r.stats.max_divergence, 1e-13);
  // the invading fluid stays in a band around the injection height
  EXPECT_EQ(r.final_field(20, 0), 0.0);
  EXPECT_EQ(r.final_field(20, 199), 0.0);
}

TEST(VeRun, MaximumPrincipleAndMirrorSymmetry) {
  Scenario sc = band_scenario(60, 20, 0.25);
  sc.permeability.rects = {{0.0, 1.0, 0.0, 0.25, 0.5}, {0.0, 1.0, 0.75, 1.0, 0.5}};
  sc.snapshot_times = {0.05, 0.1, 0.15, 0.2};
  const auto r = run_ve(sc);
  auto check = [](const ScalarField& f) {
    const Grid& g = f.grid();
    for (int j = 0; j < g.nz(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        EXPECT_GE(f(i, j), -1e-12);
        EXPECT_LE(f(i, j), 0.9 + 1e-12);
        EXPECT_NEAR(f(i, j), f(i, g.nz() - 1 - j), 1e-12);
      }
    }
  };
  for (const auto& snap : r.snapshots) check(snap.field);
  check(r.final_field);
  EXPECT_LE(r.stats.max_saturation, 0.9 + 1e-12);
}

TEST(VeRun, SnapshotsLandOnRequestedTimes) {
  Scenario sc = band_scenario(20, 10, 0.2);
  sc.snapshot_times = {0.0, 0.0333, 0.1, 0.2};
  const auto r = run_ve(sc);
  ASSERT_EQ(r.snapshots.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(r.snapshots[k].time, sc.snapshot_times[k]);
  EXPECT_EQ(r.final_time, 0.2);
  EXPECT_EQ(r.snapshots.back().field, r.final_field);
}

TEST(VeRun, Deterministic) {
  const auto a = run_ve(band_scenario(40, 20, 0.1));
  const auto b = run_ve(band_scenario(40, 20, 0.1));
  EXPECT_EQ(a.final_field, b.final_field);
}

TEST(ViRun, IdenticalToSingleLayerVe) {
  Scenario sc = band_scenario(120, 30, 0.3);
  sc.permeability.rects = {{0.0, 1.0, 0.0, 0.5, 0.5}};
  const auto vi = run_vi(sc);
  Scenario one = sc;
  one.nz = 1;
  const auto ve = run_ve(one);
  EXPECT_EQ(vi.final_field, ve.final_field);
  EXPECT_EQ(vi.stats.steps, ve.stats.steps);
  EXPECT_EQ(vi.scenario.model, ModelKind::VI);
}

TEST(ViRun, BuckleyLeverettShockSpeed) {
  Scenario sc;
  sc.model = ModelKind::VI;
  sc.nx = 1000;
  sc.nz = 1;
  sc.viscosity_ratio = 2;
  sc.end_time = 0.3;
  sc.inflow.background = 1.0;
  const auto r = run_vi(sc);
  const double speed = front_position(r.final_field, 0, 0.1) / 0.3;
  const double exact = oracle::welge_speed(2.0);
  EXPECT_NEAR(exact, (1 + std::sqrt(3.0)) / 2, 1e-9);
  EXPECT_NEAR(speed, exact, 0.02 * exact);
}
