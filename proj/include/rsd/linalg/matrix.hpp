#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsd/error.hpp"

namespace rsd {

using Vector = std::vector<double>;

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vector subtract(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "subtract");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vector scaled(std::span<const double> x, double a) {
  Vector r(x.begin(), x.end());
  for (double& v : r) v *= a;
  return r;
}

inline Vector unit_vector(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e.at(i) = 1.0;
  return e;
}

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vector>& cols) {
    if (cols.empty()) return {};
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      require_same_size(cols[j].size(), m.rows(), "Matrix::from_columns");
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const double> v) {
    require_same_size(v.size(), rows_, "Matrix::set_column");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const { return rsd::max_abs(data_); }

  double frobenius() const { return norm2(data_); }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a.cols(), b.rows(), "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline Vector operator*(const Matrix& a, std::span<const double> x) {
  require_same_size(a.cols(), x.size(), "matrix-vector product");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

inline Vector operator*(const Matrix& a, const Vector& x) { return a * std::span<const double>(x); }

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "matrix difference");
  require_same_size(a.cols(), b.cols(), "matrix difference");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "matrix sum");
  require_same_size(a.cols(), b.cols(), "matrix sum");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

inline Matrix operator*(double s, Matrix m) {
  for (double& v : m.data()) v *= s;
  return m;
}

/// aᵀ·b without forming the transpose.
inline Matrix transpose_times(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "transpose product");
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto ak = a.row(k);
    auto bk = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      auto ci = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

/// Largest entrywise deviation of `m` from the identity.
inline double distance_from_identity(const Matrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      d = std::max(d, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
  return d;
}

/// Dense symmetric matrix. Symmetry is exact: the constructor accepts an
/// asymmetry of at most `tolerance * max(1, max|m_ij|)` and then averages
/// the two triangles.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(Matrix m, double tolerance = 0.0) : m_(std::move(m)) {
    if (!m_.square()) {
      throw ValidationError("symmetric matrix must be square, got " + std::to_string(m_.rows()) +
                            "x" + std::to_string(m_.cols()));
    }
    if (m_.rows() == 0) throw ValidationError("symmetric matrix must have n >= 1");
    const double scale = std::max(1.0, m_.max_abs());
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = m_(i, j);
        const double b = m_(j, i);
        if (!(std::abs(a - b) <= tolerance * scale)) {
          throw ValidationError("symmetry violated at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
        }
        const double avg = 0.5 * (a + b);
        m_(i, j) = avg;
        m_(j, i) = avg;
      }
    }
  }

  /// Averages the two triangles of a numerically computed symmetric product.
  static SymmetricMatrix symmetrize(Matrix m) { return SymmetricMatrix(std::move(m), 1e300); }

  static SymmetricMatrix identity(std::size_t n) { return SymmetricMatrix(Matrix::identity(n)); }

  static SymmetricMatrix diagonal(std::span<const double> d) {
    return SymmetricMatrix(Matrix::diagonal(d));
  }

  std::size_t n() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }
  std::span<const double> row(std::size_t i) const { return m_.row(i); }

  double trace() const { return m_.trace(); }
  double max_abs() const { return m_.max_abs(); }

  Vector diagonal_entries() const {
    Vector d(n());
    for (std::size_t i = 0; i < n(); ++i) d[i] = m_(i, i);
    return d;
  }

  Vector operator*(std::span<const double> x) const { return m_ * x; }
  Vector operator*(const Vector& x) const { return m_ * std::span<const double>(x); }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  Matrix m_;
};

/// vᵀAv, the squared A-norm.
inline double a_norm_sq(const SymmetricMatrix& a, std::span<const double> v) {
  require_same_size(a.n(), v.size(), "a_norm_sq");
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) s += v[i] * dot(a.row(i), v);
  return s;
}

inline double a_inner(const SymmetricMatrix& a, std::span<const double> u, std::span<const double> v) {
  require_same_size(a.n(), u.size(), "a_inner");
  require_same_size(a.n(), v.size(), "a_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) s += u[i] * dot(a.row(i), v);
  return s;
}

/// Lower Cholesky factor L with A = L·Lᵀ; throws DomainError when A is not
/// positive definite.
inline Matrix cholesky(const SymmetricMatrix& a) {
  const std::size_t n = a.n();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw DomainError("matrix is not positive definite (Cholesky pivot " +
                                      std::to_string(j) + ")");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

inline Vector cholesky_solve(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  require_same_size(n, b.size(), "cholesky_solve");
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= l(k, ii) * y[k];
    y[ii] /= l(ii, ii);
  }
  return y;
}

/// Solves A x = b for positive definite A with two steps of iterative refinement.
inline Vector solve_spd(const SymmetricMatrix& a, std::span<const double> b) {
  const Matrix l = cholesky(a);
  Vector x = cholesky_solve(l, b);
  for (int pass = 0; pass < 2; ++pass) {
    Vector r = subtract(b, a * x);
    const Vector dx = cholesky_solve(l, r);
    axpy(1.0, dx, x);
  }
  return x;
}

}  // namespace rsd
