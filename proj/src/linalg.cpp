#include "flatflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flatflow/error.hpp"

namespace flatflow {

StencilMatrix::StencilMatrix(int cols, int rows, bool periodic_rows)
    : cols_(cols),
      rows_(rows),
      periodic_(periodic_rows),
      diag_(static_cast<std::size_t>(cols) * rows, 0.0),
      east_(diag_.size(), 0.0),
      north_(diag_.size(), 0.0) {}

void StencilMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t k = 0; k < n; ++k) y[k] = diag_[k] * x[k];
  for (int j = 0; j < rows_; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * cols_;
    for (int i = 0; i + 1 < cols_; ++i) {
      const std::size_t k = row + i;
      const double e = east_[k];
      y[k] += e * x[k + 1];
      y[k + 1] += e * x[k];
    }
  }
  const int coupled_rows = periodic_ ? rows_ : rows_ - 1;
  for (int j = 0; j < coupled_rows; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * cols_;
    const std::size_t up = static_cast<std::size_t>((j + 1) % rows_) * cols_;
    for (int i = 0; i < cols_; ++i) {
      const double c = north_[row + i];
      y[row + i] += c * x[up + i];
      y[up + i] += c * x[row + i];
    }
  }
}

std::vector<double> StencilMatrix::to_dense() const {
  const std::size_t n = size();
  std::vector<double> dense(n * n, 0.0);
  std::vector<double> e(n, 0.0);
  std::vector<double> col(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    apply(e, col);
    for (std::size_t r = 0; r < n; ++r) dense[r * n + c] = col[r];
    e[c] = 0.0;
  }
  return dense;
}

CsrMatrix CsrMatrix::from_dense(std::size_t n, std::span<const double> dense) {
  if (dense.size() != n * n) throw DomainError("dense matrix has wrong size");
  CsrMatrix m;
  m.diag_.resize(n);
  m.row_ptr_.assign(1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    m.diag_[r] = dense[r * n + r];
    for (std::size_t c = r + 1; c < n; ++c) {
      const double v = dense[r * n + c];
      if (v != 0.0) {
        m.cols_.push_back(c);
        m.vals_.push_back(v);
      }
    }
    m.row_ptr_.push_back(m.cols_.size());
  }
  return m;
}

void CsrMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t r = 0; r < n; ++r) y[r] = diag_[r] * x[r];
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      y[r] += vals_[p] * x[cols_[p]];
      y[cols_[p]] += vals_[p] * x[r];
    }
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

class JacobiPrec {
 public:
  explicit JacobiPrec(std::span<const double> diag) : inv_(diag.size()) {
    for (std::size_t k = 0; k < diag.size(); ++k) {
      if (!(diag[k] > 0.0)) throw DomainError("cg_solve: nonpositive diagonal entry");
      inv_[k] = 1.0 / diag[k];
    }
  }
  void apply(std::span<const double> r, std::span<double> z) const {
    for (std::size_t k = 0; k < r.size(); ++k) z[k] = inv_[k] * r[k];
  }

 private:
  std::vector<double> inv_;
};

// Factorized tridiagonal blocks along x- or z-lines of a stencil matrix.
class LinePrec {
 public:
  LinePrec(const StencilMatrix& a, LineDirection dir)
      : dir_(dir),
        cols_(a.cols()),
        rows_(a.rows()),
        lower_(a.size(), 0.0),
        upper_(a.size(), 0.0),
        inv_pivot_(a.size(), 0.0) {
    const auto diag = a.diagonal();
    for (double d : diag) {
      if (!(d > 0.0)) throw DomainError("cg_solve: nonpositive diagonal entry");
    }
    for_each_line([&](std::size_t first, std::size_t stride, int len) {
      double prev_upper = 0.0;
      for (int m = 0; m < len; ++m) {
        const std::size_t k = first + m * stride;
        const double low = m > 0 ? coupling(a, k - stride) : 0.0;
        const double pivot = diag[k] - low * prev_upper;
        if (!(pivot > 0.0)) throw DomainError("cg_solve: line block not positive definite");
        lower_[k] = low;
        inv_pivot_[k] = 1.0 / pivot;
        upper_[k] = m + 1 < len ? coupling(a, k) / pivot : 0.0;
        prev_upper = upper_[k];
      }
    });
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    for_each_line([&](std::size_t first, std::size_t stride, int len) {
      double y = 0.0;
      for (int m = 0; m < len; ++m) {
        const std::size_t k = first + m * stride;
        y = (r[k] - lower_[k] * y) * inv_pivot_[k];
        z[k] = y;
      }
      for (int m = len - 1; m-- > 0;) {
        const std::size_t k = first + m * stride;
        z[k] -= upper_[k] * z[k + stride];
      }
    });
  }

 private:
  double coupling(const StencilMatrix& a, std::size_t k) const {
    return dir_ == LineDirection::X ? a.east()[k] : a.north()[k];
  }

  template <class F>
  void for_each_line(F f) const {
    if (dir_ == LineDirection::X) {
      for (int j = 0; j < rows_; ++j) f(static_cast<std::size_t>(j) * cols_, 1, cols_);
    } else {
      for (int i = 0; i < cols_; ++i) f(static_cast<std::size_t>(i), cols_, rows_);
    }
  }

  LineDirection dir_;
  int cols_;
  int rows_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
};

// Galerkin operator on column sums: P^T A P with P the column indicator.
class ColumnCoarse {
 public:
  explicit ColumnCoarse(const StencilMatrix& a)
      : cols_(a.cols()), rows_(a.rows()), lower_(cols_, 0.0), diag_(cols_, 0.0),
        upper_(cols_, 0.0) {
    const auto d = a.diagonal();
    const auto e = a.east();
    const auto n = a.north();
    const int coupled_rows = a.periodic_rows() ? rows_ : rows_ - 1;
    for (int j = 0; j < rows_; ++j) {
      for (int i = 0; i < cols_; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * cols_ + i;
        diag_[i] += d[k];
        if (j < coupled_rows) diag_[i] += 2.0 * n[k];
        if (i + 1 < cols_) {
          upper_[i] += e[k];
          lower_[i + 1] += e[k];
        }
      }
    }
  }

  void add_correction(std::span<const double> r, std::span<double> z) const {
    std::vector<double> rc(cols_, 0.0);
    for (int j = 0; j < rows_; ++j) {
      for (int i = 0; i < cols_; ++i) rc[i] += r[static_cast<std::size_t>(j) * cols_ + i];
    }
    const auto ec = tridiag_solve(lower_, diag_, upper_, rc);
    for (int j = 0; j < rows_; ++j) {
      for (int i = 0; i < cols_; ++i) z[static_cast<std::size_t>(j) * cols_ + i] += ec[i];
    }
  }

 private:
  int cols_;
  int rows_;
  std::vector<double> lower_;
  std::vector<double> diag_;
  std::vector<double> upper_;
};

class TwoLevelPrec {
 public:
  TwoLevelPrec(const StencilMatrix& a, LineDirection dir) : line_(a, dir), coarse_(a) {}
  void apply(std::span<const double> r, std::span<double> z) const {
    line_.apply(r, z);
    coarse_.add_correction(r, z);
  }

 private:
  LinePrec line_;
  ColumnCoarse coarse_;
};

template <class Op, class Prec>
CgStats pcg(const Op& a, const Prec& prec, std::span<const double> b, std::span<double> x,
            const CgOptions& opt) {
  const std::size_t n = a.size();

  CgStats stats;
  stats.rhs_norm = std::sqrt(dot(b, b));
  if (stats.rhs_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return stats;
  }

  std::vector<double> r(n), z(n), p(n), ap(n);
  a.apply(x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - ap[k];

  const double target = opt.rel_tol * stats.rhs_norm;
  double rnorm = std::sqrt(dot(r, r));
  if (rnorm <= target) {
    stats.residual_norm = rnorm;
    return stats;
  }

  prec.apply(r, z);
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= opt.max_iter; ++it) {
    a.apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw SolverError("cg_solve: operator not positive definite", it, rnorm);
    const double alpha = rz / pap;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    if (opt.observer) opt.observer(it, x);
    rnorm = std::sqrt(dot(r, r));
    stats.iterations = it;
    if (rnorm <= target) {
      stats.residual_norm = rnorm;
      return stats;
    }
    prec.apply(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  throw SolverError("cg_solve: no convergence", opt.max_iter, rnorm);
}

void check_dims(std::size_t n, std::span<const double> b, std::span<double> x) {
  if (b.size() != n || x.size() != n) throw DomainError("cg_solve: dimension mismatch");
}

}  // namespace

LineDirection preferred_line_direction(const StencilMatrix& a, bool with_coarse) {
  if (a.periodic_rows() && a.rows() > 1) return LineDirection::X;
  const int cols = a.cols();
  const int rows = a.rows();
  double ax = 0.0, az = 0.0, d = 0.0;
  for (double v : a.east()) ax += std::abs(v);
  for (double v : a.north()) az += std::abs(v);
  for (double v : a.diagonal()) d += v;
  const double n = static_cast<double>(a.size());
  ax = cols > 1 ? ax / (n - rows) : 0.0;
  az = rows > 1 ? az / (n - cols) : 0.0;
  const double shift = std::max(0.0, d / n - 2.0 * ax - 2.0 * az);
  const double pi2 = std::acos(-1.0) * std::acos(-1.0);
  const double lam_x = ax * pi2 / (double(cols) * cols);
  const double lam_z = az * pi2 / (double(rows) * rows);
  // Smallest eigenvalue left to the Krylov method: with the coarse space the
  // z-independent modes are gone and the worst mode varies once in z.
  const double low = shift + lam_x + (with_coarse ? lam_z : 0.0);
  const double cond_x = (shift + lam_x + 2.0 * az) / low;
  const double cond_z = (shift + lam_z + 2.0 * ax) / low;
  return cond_z < cond_x ? LineDirection::Z : LineDirection::X;
}

CgStats cg_solve(const StencilMatrix& a, std::span<const double> b, std::span<double> x,
                 const CgOptions& options) {
  check_dims(a.size(), b, x);
  switch (options.preconditioner) {
    case Preconditioner::Jacobi:
      return pcg(a, JacobiPrec(a.diagonal()), b, x, options);
    case Preconditioner::Line:
      return pcg(a, LinePrec(a, preferred_line_direction(a, false)), b, x, options);
    case Preconditioner::TwoLevel:
      return pcg(a, TwoLevelPrec(a, preferred_line_direction(a, true)), b, x, options);
  }
  throw DomainError("cg_solve: unknown preconditioner");
}

CgStats cg_solve(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                 const CgOptions& options) {
  check_dims(a.size(), b, x);
  return pcg(a, JacobiPrec(a.diagonal()), b, x, options);
}

std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw DomainError("tridiag_solve: dimension mismatch");
  }
  std::vector<double> c(n), d(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw DomainError("tridiag_solve: zero pivot in row 0");
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0) throw DomainError("tridiag_solve: zero pivot in row " + std::to_string(i));
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace flatflow
