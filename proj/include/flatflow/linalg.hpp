#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace flatflow {

/// Symmetric 5-point operator on a cols x rows lattice (row-major, rows
/// outer). Only the east and north couplings are stored; apply() mirrors
/// them. With periodic_rows the top row couples to the bottom row.
class StencilMatrix {
 public:
  StencilMatrix(int cols, int rows, bool periodic_rows = false);

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }
  bool periodic_rows() const noexcept { return periodic_; }
  std::size_t size() const noexcept { return diag_.size(); }

  std::span<double> diagonal() noexcept { return diag_; }
  std::span<const double> diagonal() const noexcept { return diag_; }
  /// east()[k]: entry coupling k and k+1 (zero in the last column).
  std::span<double> east() noexcept { return east_; }
  std::span<const double> east() const noexcept { return east_; }
  /// north()[k]: entry coupling k and north_of(k) (zero in the top row
  /// unless periodic).
  std::span<double> north() noexcept { return north_; }
  std::span<const double> north() const noexcept { return north_; }

  std::size_t north_of(std::size_t k) const noexcept {
    const std::size_t n = size();
    const std::size_t up = k + cols_;
    return up < n ? up : up - n;
  }

  void apply(std::span<const double> x, std::span<double> y) const;

  /// Dense row-major copy (testing and small oracles).
  std::vector<double> to_dense() const;

 private:
  int cols_;
  int rows_;
  bool periodic_;
  std::vector<double> diag_;
  std::vector<double> east_;
  std::vector<double> north_;
};

/// General sparse symmetric matrix; stores the diagonal plus the strict
/// upper triangle in compressed rows.
class CsrMatrix {
 public:
  /// Builds from a dense row-major matrix, reading its upper triangle.
  static CsrMatrix from_dense(std::size_t n, std::span<const double> dense);

  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const double> diagonal() const noexcept { return diag_; }
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  std::vector<double> diag_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

enum class Preconditioner {
  Jacobi,
  /// Block Jacobi over whole grid lines (exact tridiagonal solves). The line
  /// direction is chosen from the stencil so that the strongly coupled
  /// direction of an anisotropic operator is inverted exactly. Stencil
  /// matrices only; general matrices fall back to Jacobi.
  Line,
  /// Line blocks plus an additive coarse correction on column sums (one
  /// unknown per x-position), which removes the z-independent modes that
  /// dominate the pressure of a flat domain.
  TwoLevel,
};

struct CgOptions {
  double rel_tol = 1e-10;
  Preconditioner preconditioner = Preconditioner::Jacobi;
  int max_iter = 100000;
  /// Called with (iteration, current iterate) after every update.
  std::function<void(int, std::span<const double>)> observer;
};

struct CgStats {
  int iterations = 0;
  double residual_norm = 0.0;
  double rhs_norm = 0.0;
};

/// Preconditioned conjugate gradients (Jacobi unless the options pick a
/// line preconditioner). x holds the initial guess on
/// entry and the solution on return; the stopping test is
/// ||b - A x|| <= rel_tol * ||b||. Throws SolverError after max_iter.
CgStats cg_solve(const StencilMatrix& a, std::span<const double> b, std::span<double> x,
                 const CgOptions& options = {});
CgStats cg_solve(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                 const CgOptions& options = {});

enum class LineDirection { X, Z };

/// Direction the line preconditioners pick for this operator: the one with
/// the smaller estimated condition number of the preconditioned system.
/// Periodic operators always use x-lines.
LineDirection preferred_line_direction(const StencilMatrix& a, bool with_coarse);

/// Thomas algorithm. lower[i] multiplies x[i-1] in row i (lower[0] unused),
/// upper[i] multiplies x[i+1] (upper[n-1] unused).
std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs);

}  // namespace flatflow
