#pragma once

#include <chrono>

#include "flatflow/run_result.hpp"
#include "flatflow/scenario.hpp"
#include "flatflow/ve_solver.hpp"

namespace flatflow::detail {

/// One model's time step, split so the driver can clip dt onto snapshot
/// times after the stability limit is known.
class Stepper {
 public:
  virtual ~Stepper() = default;

  /// Computes whatever the step needs from s and returns the largest stable dt.
  virtual double prepare(const ScalarField& s) = 0;
  virtual void advance(ScalarField& s, double dt, BoundaryRates& rates) = 0;

  Timings timings;
  SolverStats stats;
};

double mass_of(const ScalarField& s, const ScalarField& porosity);

RunResult drive(const Scenario& scenario, const Setup& setup, Stepper& stepper);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace flatflow::detail
