#include "stepping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatflow/error.hpp"

namespace flatflow {

double MassLedger::relative_imbalance() const noexcept {
  return std::abs(imbalance()) / std::max(1.0, std::abs(current_mass));
}

namespace detail {

double mass_of(const ScalarField& s, const ScalarField& porosity) {
  const Grid& g = s.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.cell_count(); ++k) sum += porosity[k] * s[k];
  return sum * g.dx() * g.dz();
}

RunResult drive(const Scenario& scenario, const Setup& setup, Stepper& stepper) {
  const Stopwatch clock;
  RunResult result{scenario, {}, setup.initial, 0.0, {}, {}, {}};

  std::vector<double> stops = scenario.snapshot_times;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  ScalarField s = setup.initial;
  result.ledger.initial_mass = mass_of(s, setup.porosity);

  double t = 0.0;
  std::size_t next = 0;
  auto take_snapshots = [&] {
    while (next < stops.size() && stops[next] <= t) {
      result.snapshots.push_back({stops[next], s});
      ++next;
    }
  };
  take_snapshots();
  double peak = *std::max_element(s.values().begin(), s.values().end());

  const double end = scenario.end_time;
  while (t < end) {
    const double target = next < stops.size() ? std::min(stops[next], end) : end;
    double dt = stepper.prepare(s);
    if (!(dt > 0.0)) {
      throw SolverError("time step collapsed at t=" + std::to_string(t), 0, dt);
    }
    bool landed = false;
    if (dt >= target - t - 1e-14 * std::max(1.0, target)) {
      dt = target - t;
      landed = true;
    }
    BoundaryRates rates;
    stepper.advance(s, dt, rates);
    result.ledger.injected += dt * rates.injected;
    result.ledger.escaped += dt * rates.escaped;
    t = landed ? target : t + dt;
    ++stepper.stats.steps;
    peak = std::max(peak, *std::max_element(s.values().begin(), s.values().end()));
    take_snapshots();
  }

  result.final_field = s;
  result.final_time = t;
  result.ledger.current_mass = mass_of(s, setup.porosity);
  result.stats = stepper.stats;
  result.stats.max_saturation = peak;
  result.timings = stepper.timings;
  result.timings.total = clock.seconds();
  return result;
}

}  // namespace detail
}  // namespace flatflow
