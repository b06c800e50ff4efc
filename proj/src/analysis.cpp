#include "flatflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flatflow/error.hpp"

namespace flatflow {

namespace {

void check_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
}

}  // namespace

double l1_distance(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.grid().cell_count(); ++k) sum += std::abs(a[k] - b[k]);
  return sum * a.grid().dx() * a.grid().dz();
}

double linf_distance(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.grid().cell_count(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double front_position(std::span<const double> layer, double threshold) {
  const std::size_t n = layer.size();
  if (n == 0) return 0.0;
  std::size_t last = n;
  for (std::size_t i = n; i-- > 0;) {
    if (layer[i] > threshold) {
      last = i;
      break;
    }
  }
  if (last == n) return 0.0;
  if (last + 1 == n) return 1.0;
  const double h = 1.0 / static_cast<double>(n);
  const double a = layer[last];
  const double b = layer[last + 1];
  return (last + 0.5) * h + (a - threshold) / (a - b) * h;
}

double front_position(const ScalarField& s, int layer, double threshold) {
  return front_position(s.layer(layer), threshold);
}

double averaged_front_position(const ScalarField& s, double threshold) {
  const Grid& g = s.grid();
  std::vector<double> mean(g.nx(), 0.0);
  for (int j = 0; j < g.nz(); ++j) {
    for (int i = 0; i < g.nx(); ++i) mean[i] += s(i, j);
  }
  for (double& m : mean) m /= g.nz();
  return front_position(mean, threshold);
}

FrontReport front_report(const ScalarField& s, int layer, double threshold, double time) {
  const double x = front_position(s, layer, threshold);
  return {x, time > 0.0 ? x / time : 0.0, threshold};
}

double overshoot(const ScalarField& s, double inflow_max) {
  const auto v = s.values();
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  return std::max(0.0, peak - inflow_max);
}

std::vector<TimingRow> timing_report(const std::vector<RunResult>& results) {
  std::vector<TimingRow> rows;
  for (const auto& r : results) {
    char label[96];
    std::snprintf(label, sizeof label, "%s %dx%d", std::string(to_string(r.scenario.model)).c_str(),
                  r.scenario.nx, r.scenario.nz);
    rows.push_back({label, r.timings.total, r.timings.pressure, r.timings.transport,
                    r.timings.helmholtz, 1.0});
  }
  if (!rows.empty() && rows.back().total > 0.0) {
    for (auto& row : rows) row.ratio = row.total / rows.back().total;
  }
  return rows;
}

std::string format_timing_table(const std::vector<TimingRow>& rows) {
  std::string out = "label                     total[s]   pressure[s] transport[s] helmholtz[s] ratio\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-24s %10.4f %12.4f %12.4f %12.4f %8.3f\n", r.label.c_str(),
                  r.total, r.pressure, r.transport, r.helmholtz, r.ratio);
    out += line;
  }
  return out;
}

}  // namespace flatflow
