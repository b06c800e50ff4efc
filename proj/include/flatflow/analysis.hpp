#pragma once

#include <string>
#include <vector>

#include "flatflow/grid.hpp"
#include "flatflow/run_result.hpp"

namespace flatflow {

/// dx dz sum |a - b|. Throws DomainError on a grid mismatch.
double l1_distance(const ScalarField& a, const ScalarField& b);
double linf_distance(const ScalarField& a, const ScalarField& b);

/// Furthest x where the piecewise-linear interpolant of a layer through
/// the cell centers crosses `threshold`. 0 when the layer never exceeds it;
/// 1 when the last cell is still above it.
double front_position(std::span<const double> layer, double threshold);
double front_position(const ScalarField& s, int layer, double threshold);
/// Front of the vertically averaged profile.
double averaged_front_position(const ScalarField& s, double threshold);

struct FrontReport {
  double position = 0.0;
  double speed = 0.0;
  double threshold = 0.0;
};
FrontReport front_report(const ScalarField& s, int layer, double threshold, double time);

/// max(0, max_cells(s) - inflow_max).
double overshoot(const ScalarField& s, double inflow_max);

struct TimingRow {
  std::string label;
  double total = 0.0;
  double pressure = 0.0;
  double transport = 0.0;
  double helmholtz = 0.0;
  double ratio = 1.0;  ///< total / total of the last row
};

std::vector<TimingRow> timing_report(const std::vector<RunResult>& results);
std::string format_timing_table(const std::vector<TimingRow>& rows);

}  // namespace flatflow
