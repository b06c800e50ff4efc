#include "flatflow/grid.hpp"

#include <algorithm>
#include <cmath>

#include "flatflow/error.hpp"

namespace flatflow {

Grid::Grid(int nx, int nz) : nx_(nx), nz_(nz) {
  if (nx < 1 || nz < 1) {
    throw DomainError("grid needs at least one cell in each direction (got " +
                      std::to_string(nx) + "x" + std::to_string(nz) + ")");
  }
  dx_ = 1.0 / nx;
  dz_ = 1.0 / nz;
}

Grid build_grid(int nx, int nz) { return Grid(nx, nz); }

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), values_(grid.cell_count(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count()) {
    throw DomainError("field size " + std::to_string(values_.size()) +
                      " does not match grid cell count " + std::to_string(grid_.cell_count()));
  }
}

EdgeField::EdgeField(const Grid& grid)
    : grid_(grid),
      x_edges_(static_cast<std::size_t>(grid.nx() + 1) * grid.nz(), 0.0),
      z_edges_(static_cast<std::size_t>(grid.nx()) * (grid.nz() + 1), 0.0) {}

namespace {
double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

double EdgeField::max_abs_u() const noexcept { return max_abs(x_edges_); }
double EdgeField::max_abs_w() const noexcept { return max_abs(z_edges_); }

double EdgeField::cell_divergence(int i, int j) const noexcept {
  return grid_.dz() * (u(i + 1, j) - u(i, j)) + grid_.dx() * (w(i, j + 1) - w(i, j));
}

double EdgeField::max_abs_divergence() const noexcept {
  double m = 0.0;
  for (int j = 0; j < grid_.nz(); ++j)
    for (int i = 0; i < grid_.nx(); ++i) m = std::max(m, std::abs(cell_divergence(i, j)));
  return m;
}

double ZProfile::operator()(double z) const noexcept {
  // Intervals are half-open (lo, hi]; z = 0 belongs to the first piece
  // starting at 0.
  for (const auto& p : pieces) {
    if ((z > p.lo && z <= p.hi) || (z == p.lo && p.lo == 0.0)) return p.value;
  }
  return background;
}

namespace {

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

std::vector<double> layer_average(const ZProfile& profile, int nz) {
  const Grid g(1, nz);
  std::vector<double> out(nz);
  for (int j = 0; j < nz; ++j) {
    const double lo = j * g.dz();
    const double hi = (j + 1 == nz) ? 1.0 : (j + 1) * g.dz();
    const double width = hi - lo;
    double covered = 0.0;
    double integral = 0.0;
    for (const auto& p : profile.pieces) {
      const double len = overlap(lo, hi, p.lo, p.hi);
      covered += len;
      integral += len * p.value;
    }
    integral += std::max(0.0, width - covered) * profile.background;
    out[j] = integral / width;
  }
  return out;
}

std::vector<double> layer_average(const std::function<double(double)>& profile, int nz,
                                  int samples_per_layer) {
  samples_per_layer = std::max(samples_per_layer, 64);
  const double dz = 1.0 / nz;
  const double h = dz / samples_per_layer;
  std::vector<double> out(nz);
  for (int j = 0; j < nz; ++j) {
    double sum = 0.0;
    for (int k = 0; k < samples_per_layer; ++k) sum += profile(j * dz + (k + 0.5) * h);
    out[j] = sum / samples_per_layer;
  }
  return out;
}

ScalarField cell_average(const PlanarProfile& profile, const Grid& grid) {
  ScalarField field(grid);
  for (int j = 0; j < grid.nz(); ++j) {
    const double z0 = j * grid.dz();
    const double z1 = (j + 1 == grid.nz()) ? 1.0 : (j + 1) * grid.dz();
    for (int i = 0; i < grid.nx(); ++i) {
      const double x0 = i * grid.dx();
      const double x1 = (i + 1 == grid.nx()) ? 1.0 : (i + 1) * grid.dx();
      const double area = (x1 - x0) * (z1 - z0);
      double covered = 0.0;
      double integral = 0.0;
      for (const auto& r : profile.rects) {
        const double a = overlap(x0, x1, r.x0, r.x1) * overlap(z0, z1, r.z0, r.z1);
        covered += a;
        integral += a * r.value;
      }
      integral += std::max(0.0, area - covered) * profile.background;
      field(i, j) = integral / area;
    }
  }
  return field;
}

}  // namespace flatflow
