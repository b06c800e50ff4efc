#pragma once

#include <vector>

#include "flatflow/grid.hpp"
#include "flatflow/scenario.hpp"

namespace flatflow {

/// Mass bookkeeping in units of the unit domain (porosity-weighted
/// saturation integral).
struct MassLedger {
  double initial_mass = 0.0;
  double injected = 0.0;
  double escaped = 0.0;
  double current_mass = 0.0;

  double imbalance() const noexcept { return current_mass - (initial_mass + injected - escaped); }
  double relative_imbalance() const noexcept;
};

/// Wall-clock seconds, split by phase.
struct Timings {
  double total = 0.0;
  double pressure = 0.0;   ///< assembly + elliptic solve (TP, BTP, MS coarse solve)
  double transport = 0.0;  ///< velocity reconstruction + explicit update
  double helmholtz = 0.0;  ///< pseudo-parabolic and velocity-recovery solves
};

struct SolverStats {
  long steps = 0;
  long pressure_iterations = 0;
  long helmholtz_iterations = 0;
  int max_pressure_iterations = 0;
  /// Largest per-cell |sum of n.v |E|| seen over the run.
  double max_divergence = 0.0;
  /// Largest cell saturation over every time level, the initial one included.
  double max_saturation = 0.0;
};

struct Snapshot {
  double time;
  ScalarField field;
};

struct RunResult {
  Scenario scenario;
  std::vector<Snapshot> snapshots;
  ScalarField final_field;
  double final_time = 0.0;
  MassLedger ledger;
  Timings timings;
  SolverStats stats;
};

}  // namespace flatflow
