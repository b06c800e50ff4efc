#include "flatflow/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "flatflow/analysis.hpp"
#include "flatflow/brinkman_solver.hpp"
#include "flatflow/error.hpp"
#include "flatflow/multiscale_solver.hpp"
#include "flatflow/scenario_io.hpp"
#include "flatflow/tp_solver.hpp"
#include "flatflow/ve_solver.hpp"

namespace flatflow {

RunResult run_scenario(const Scenario& scenario) {
  switch (scenario.model) {
    case ModelKind::TP: return run_tp(scenario);
    case ModelKind::VE: return run_ve(scenario);
    case ModelKind::VI: return run_vi(scenario);
    case ModelKind::MS: return run_multiscale(scenario);
    case ModelKind::BTP: return run_btp(scenario);
    case ModelKind::BVE: return run_bve(scenario);
  }
  throw Error("unknown model");
}

int worker_limit() {
  if (const char* env = std::getenv("FLATFLOW_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double median_runtime(const Scenario& scenario, int repeats) {
  std::vector<double> t;
  for (int r = 0; r < repeats; ++r) t.push_back(run_scenario(scenario).timings.total);
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

ModelKind reference_model(ModelKind full) {
  switch (full) {
    case ModelKind::TP: return ModelKind::VE;
    case ModelKind::BTP: return ModelKind::BVE;
    default: throw Error("convergence studies need a TP or BTP scenario");
  }
}

std::pair<ModelKind, ModelKind> bench_pair(ModelKind model) {
  switch (model) {
    case ModelKind::TP:
    case ModelKind::VE:
    case ModelKind::VI: return {ModelKind::TP, ModelKind::VE};
    case ModelKind::MS: return {ModelKind::MS, ModelKind::VE};
    case ModelKind::BTP:
    case ModelKind::BVE: return {ModelKind::BTP, ModelKind::BVE};
  }
  throw Error("unknown model");
}

namespace {

// Runs every job on at most worker_limit() threads.
template <class Job>
void run_parallel(std::size_t count, Job job) {
  const std::size_t workers = std::min<std::size_t>(count, worker_limit());
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < count; k += workers) {
        try {
          job(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const Scenario& scenario,
                                              const std::vector<double>& gammas) {
  Scenario reference = scenario;
  reference.model = reference_model(scenario.model);
  const RunResult ref = run_scenario(reference);

  std::vector<ConvergenceRow> rows(gammas.size());
  run_parallel(gammas.size(), [&](std::size_t k) {
    const RunResult r = run_scenario(with_gamma(scenario, gammas[k]));
    rows[k] = {gammas[k], l1_distance(r.final_field, ref.final_field)};
  });
  return rows;
}

bool strictly_decreasing(const std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].distance < rows[k - 1].distance)) return false;
  }
  return true;
}

std::vector<BenchRow> bench_study(const Scenario& scenario,
                                  const std::vector<std::pair<int, int>>& grids, int repeats) {
  const auto [full_model, reduced_model] = bench_pair(scenario.model);
  std::vector<BenchRow> rows;
  // Timed runs stay sequential so they do not compete for cores.
  for (const auto& [nx, nz] : grids) {
    Scenario full = scenario;
    full.model = full_model;
    full.nx = nx;
    full.nz = nz;
    Scenario reduced = full;
    reduced.model = reduced_model;
    const double tf = median_runtime(full, repeats);
    const double tr = median_runtime(reduced, repeats);
    rows.push_back({nx, nz, tf, tr, tr > 0.0 ? tf / tr : 0.0});
  }
  return rows;
}

std::vector<std::pair<int, int>> parse_grid_list(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    int nx = 0;
    int nz = 0;
    char sep = 0;
    char extra = 0;
    if (std::sscanf(item.c_str(), " %d %c %d %c", &nx, &sep, &nz, &extra) != 3 ||
        (sep != 'x' && sep != 'X') || nx < 1 || nz < 1) {
      throw Error("bad grid '" + item + "', expected NXxNZ");
    }
    out.emplace_back(nx, nz);
    pos = comma + 1;
  }
  if (out.empty()) throw Error("empty grid list");
  return out;
}

int cmd_run(const std::filesystem::path& path, const std::optional<std::filesystem::path>& out_dir,
            std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const RunResult r = run_scenario(sc);
  char line[256];
  std::snprintf(line, sizeof line, "model %s  grid %dx%d  steps %ld  time %.6g  peak saturation %.12g\n",
                std::string(to_string(r.scenario.model)).c_str(), r.scenario.nx, r.scenario.nz,
                r.stats.steps, r.final_time, r.stats.max_saturation);
  out << line;
  std::snprintf(line, sizeof line,
                "mass initial %.12e  injected %.12e  escaped %.12e  final %.12e  rel.imbalance %.3e\n",
                r.ledger.initial_mass, r.ledger.injected, r.ledger.escaped, r.ledger.current_mass,
                r.ledger.relative_imbalance());
  out << line;
  std::snprintf(line, sizeof line,
                "wall %.3fs (pressure %.3fs, transport %.3fs, helmholtz %.3fs)  cg iterations "
                "%ld/%ld\n",
                r.timings.total, r.timings.pressure, r.timings.transport, r.timings.helmholtz,
                r.stats.pressure_iterations, r.stats.helmholtz_iterations);
  out << line;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
      const auto file = *out_dir / ("snapshot_" + std::to_string(k) + ".txt");
      write_field(r.snapshots[k].field, r.snapshots[k].time, file);
      out << "wrote " << file.string() << '\n';
    }
    const auto file = *out_dir / "final.txt";
    write_field(r.final_field, r.final_time, file);
    out << "wrote " << file.string() << '\n';
  }
  return 0;
}

int cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                const std::string& metric, std::ostream& out) {
  if (metric != "l1" && metric != "linf") throw Error("metric must be l1 or linf");
  const Scenario sa = load_scenario(a);
  const Scenario sb = load_scenario(b);
  const RunResult ra = run_scenario(sa);
  const RunResult rb = run_scenario(sb);
  const double d = metric == "l1" ? l1_distance(ra.final_field, rb.final_field)
                                  : linf_distance(ra.final_field, rb.final_field);
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-6s %-5s %.6e\n",
                std::string(to_string(sa.model)).c_str(), std::string(to_string(sb.model)).c_str(),
                metric.c_str(), d);
  out << "a      b      metric distance\n" << line;
  return 0;
}

int cmd_convergence(const std::filesystem::path& path, const std::vector<double>& gammas,
                    std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const auto rows = convergence_study(sc, gammas);
  out << "gamma        l1 distance to " << to_string(reference_model(sc.model)) << '\n';
  char line[128];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-12.6g %.6e\n", r.gamma, r.distance);
    out << line;
  }
  const bool ok = strictly_decreasing(rows);
  out << "verdict: " << (ok ? "strictly decreasing" : "NOT strictly decreasing") << '\n';
  return ok ? 0 : 3;
}

int cmd_bench(const std::filesystem::path& path, const std::vector<std::pair<int, int>>& grids,
              std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const auto [full, reduced] = bench_pair(sc.model);
  const auto rows = bench_study(sc, grids);
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %12s %12s %8s\n", "grid",
                (std::string(to_string(full)) + "[s]").c_str(),
                (std::string(to_string(reduced)) + "[s]").c_str(), "ratio");
  out << line;
  for (const auto& r : rows) {
    const std::string grid = std::to_string(r.nx) + "x" + std::to_string(r.nz);
    std::snprintf(line, sizeof line, "%-10s %12.4f %12.4f %8.3f\n", grid.c_str(), r.full_seconds,
                  r.reduced_seconds, r.ratio);
    out << line;
  }
  return 0;
}

}  // namespace flatflow
