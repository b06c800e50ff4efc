#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace flatflow {

/// Uniform Cartesian grid over the unit square. Cells are indexed (i, j)
/// with i along the flow direction x and j along the height z; storage is
/// row-major by layer (j outer, i inner).
class Grid {
 public:
  Grid(int nx, int nz);

  int nx() const noexcept { return nx_; }
  int nz() const noexcept { return nz_; }
  double dx() const noexcept { return dx_; }
  double dz() const noexcept { return dz_; }
  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(nx_) * nz_; }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  struct Cell {
    int i;
    int j;
    bool operator==(const Cell&) const = default;
  };
  Cell unflatten(std::size_t k) const noexcept {
    return {static_cast<int>(k % nx_), static_cast<int>(k / nx_)};
  }

  double x_center(int i) const noexcept { return (i + 0.5) * dx_; }
  double z_center(int j) const noexcept { return (j + 0.5) * dz_; }

  bool operator==(const Grid& o) const noexcept { return nx_ == o.nx_ && nz_ == o.nz_; }

 private:
  int nx_;
  int nz_;
  double dx_;
  double dz_;
};

Grid build_grid(int nx, int nz);

/// One value per cell center.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<const double> layer(int j) const noexcept {
    return std::span<const double>(values_).subspan(grid_.index(0, j), grid_.nx());
  }

  bool operator==(const ScalarField& o) const noexcept {
    return grid_ == o.grid_ && values_ == o.values_;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Normal velocity components on cell edges: u on the (nx+1)*nz vertical
/// edges x_{i-1/2}, w on the nx*(nz+1) horizontal edges z_{j-1/2}.
class EdgeField {
 public:
  explicit EdgeField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }

  double& u(int i, int j) noexcept { return x_edges_[static_cast<std::size_t>(j) * (grid_.nx() + 1) + i]; }
  double u(int i, int j) const noexcept { return x_edges_[static_cast<std::size_t>(j) * (grid_.nx() + 1) + i]; }
  double& w(int i, int j) noexcept { return z_edges_[static_cast<std::size_t>(j) * grid_.nx() + i]; }
  double w(int i, int j) const noexcept { return z_edges_[static_cast<std::size_t>(j) * grid_.nx() + i]; }

  std::span<double> x_edges() noexcept { return x_edges_; }
  std::span<const double> x_edges() const noexcept { return x_edges_; }
  std::span<double> z_edges() noexcept { return z_edges_; }
  std::span<const double> z_edges() const noexcept { return z_edges_; }

  double max_abs_u() const noexcept;
  double max_abs_w() const noexcept;

  /// Net outward flux of cell (i, j): dz*(u_E - u_W) + dx*(w_N - w_S).
  double cell_divergence(int i, int j) const noexcept;
  double max_abs_divergence() const noexcept;

 private:
  Grid grid_;
  std::vector<double> x_edges_;
  std::vector<double> z_edges_;
};

/// Piecewise-constant profile over z in [0, 1]. Intervals must be disjoint;
/// points not covered take the background value.
struct ZProfile {
  struct Piece {
    double lo;
    double hi;
    double value;
    bool operator==(const Piece&) const = default;
  };
  double background = 0.0;
  std::vector<Piece> pieces;

  double operator()(double z) const noexcept;
  bool operator==(const ZProfile&) const = default;
};

/// Piecewise-constant field over the unit square, built from disjoint
/// rectangles on a background.
struct PlanarProfile {
  struct Rect {
    double x0;
    double x1;
    double z0;
    double z1;
    double value;
    bool operator==(const Rect&) const = default;
  };
  double background = 1.0;
  std::vector<Rect> rects;

  bool operator==(const PlanarProfile&) const = default;
};

/// Layer means (1/dz) * integral of the profile over each of nz layers,
/// computed by exact sub-interval integration.
std::vector<double> layer_average(const ZProfile& profile, int nz);

/// Layer means of a general integrand by composite midpoint rule.
std::vector<double> layer_average(const std::function<double(double)>& profile, int nz,
                                  int samples_per_layer = 64);

/// Exact cell averages of a planar profile.
ScalarField cell_average(const PlanarProfile& profile, const Grid& grid);

}  // namespace flatflow
