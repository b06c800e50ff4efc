#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "flatflow/run_result.hpp"
#include "flatflow/scenario.hpp"

namespace flatflow {

/// Runs the solver matching scenario.model.
RunResult run_scenario(const Scenario& scenario);

/// Worker cap from FLATFLOW_THREADS (default: hardware concurrency, at least 1).
int worker_limit();

/// Median wall-clock total over `repeats` sequential runs.
double median_runtime(const Scenario& scenario, int repeats = 3);

/// The reference model a convergence study compares against (VE for TP,
/// BVE for BTP) and the full/reduced pair a benchmark times.
ModelKind reference_model(ModelKind full);
std::pair<ModelKind, ModelKind> bench_pair(ModelKind model);

struct ConvergenceRow {
  double gamma;
  double distance;
};
std::vector<ConvergenceRow> convergence_study(const Scenario& scenario,
                                              const std::vector<double>& gammas);
bool strictly_decreasing(const std::vector<ConvergenceRow>& rows);

struct BenchRow {
  int nx;
  int nz;
  double full_seconds;
  double reduced_seconds;
  double ratio;  ///< full / reduced
};
std::vector<BenchRow> bench_study(const Scenario& scenario,
                                  const std::vector<std::pair<int, int>>& grids,
                                  int repeats = 3);

/// Parses "100x40,200x40".
std::vector<std::pair<int, int>> parse_grid_list(const std::string& text);

int cmd_run(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& out_dir,
            std::ostream& out);
int cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                const std::string& metric, std::ostream& out);
/// Exit status 3 when the distances are not strictly decreasing.
int cmd_convergence(const std::filesystem::path& scenario, const std::vector<double>& gammas,
                    std::ostream& out);
int cmd_bench(const std::filesystem::path& scenario, const std::vector<std::pair<int, int>>& grids,
              std::ostream& out);

}  // namespace flatflow
