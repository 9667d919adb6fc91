#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/linalg/matrix.hpp"
#include "rsd/rng.hpp"

namespace rsd {

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns;
/// column i belongs to eigenvalue i.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  std::size_t n() const { return eigenvalues.size(); }
  Vector eigenvector(std::size_t i) const { return eigenvectors.column(i); }
  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm falls below this fraction of ‖A‖_F.
  double threshold = 1e-12;
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
inline SpectralDecomposition jacobi_eigendecompose(const SymmetricMatrix& a,
                                                   const JacobiOptions& opts = {}) {
  const std::size_t n = a.n();
  Matrix m = a.matrix();
  Matrix v = Matrix::identity(n);
  const double scale = a.matrix().frobenius();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= opts.max_sweeps; ++sweep) {
    const double off = off_norm();
    if (off <= opts.threshold * scale) {
      converged = true;
      break;
    }
    if (sweep == opts.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = m(k, p);
          const double akq = m(k, q);
          const double nkp = c * akp - s * akq;
          const double nkq = s * akp + c * akq;
          m(k, p) = nkp;
          m(p, k) = nkp;
          m(k, q) = nkq;
          m(q, k) = nkq;
        }
        m(p, p) -= t * apq;
        m(q, q) += t * apq;
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw DecompositionError("Jacobi eigensolver did not converge within " +
                             std::to_string(opts.max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });

  SpectralDecomposition d{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    d.eigenvalues[c] = m(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) d.eigenvectors(r, c) = v(r, order[c]);
  }
  return d;
}

inline Vector eigenvalues(const SymmetricMatrix& a) { return jacobi_eigendecompose(a).eigenvalues; }

inline void require_orthogonal(const Matrix& u, double tol, const char* what) {
  if (!u.square()) throw ValidationError(std::string(what) + ": matrix must be square");
  const double dev = distance_from_identity(transpose_times(u, u));
  if (!(dev <= tol)) {
    throw ValidationError(std::string(what) + ": matrix is not orthogonal (max |UᵀU - I| = " +
                          std::to_string(dev) + ")");
  }
}

/// U·diag(λ)·Uᵀ for orthogonal U.
inline SymmetricMatrix matrix_from_spectrum(std::span<const double> eigenvalues, const Matrix& u) {
  require_same_size(eigenvalues.size(), u.rows(), "matrix_from_spectrum");
  require_orthogonal(u, 1e-10, "matrix_from_spectrum");
  for (double l : eigenvalues) {
    if (!(l > 0.0)) throw DomainError("matrix_from_spectrum: eigenvalues must be positive");
  }
  const std::size_t n = u.rows();
  Matrix scaled_u = u;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled_u(i, j) *= eigenvalues[j];
  // (UΛ)·Uᵀ
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = dot(scaled_u.row(i), u.row(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  return SymmetricMatrix(std::move(out));
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt (with reorthogonalization)
/// of a standard normal matrix. The implied R factor has a positive diagonal,
/// which is the sign correction that makes the distribution uniform.
inline Matrix sample_random_orthogonal(std::size_t n, Rng& rng) {
  if (n == 0) throw ParameterError("sample_random_orthogonal: n must be >= 1");
  std::vector<Vector> cols(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cols[j][i] = rng.normal();
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) axpy(-dot(cols[k], cols[j]), cols[k], cols[j]);
    }
    const double nrm = norm2(cols[j]);
    for (double& x : cols[j]) x /= nrm;
  }
  return Matrix::from_columns(cols);
}

/// U·Λᵖ·Uᵀ.
inline SymmetricMatrix matrix_power(const SpectralDecomposition& d, double p) {
  const bool integral = std::floor(p) == p;
  if (p < 0.0 || !integral) {
    for (double l : d.eigenvalues) {
      if (!(l > 0.0)) {
        throw DomainError("matrix_power: exponent " + std::to_string(p) +
                          " requires positive eigenvalues");
      }
    }
  }
  const std::size_t n = d.n();
  Vector lp(n);
  for (std::size_t i = 0; i < n; ++i) lp[i] = std::pow(d.eigenvalues[i], p);
  const Matrix& u = d.eigenvectors;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * lp[k] * u(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  return SymmetricMatrix(std::move(out));
}

/// Identity with a 45° rotation block in the leading 2×2 corner.
inline Matrix build_rotation_embedding(std::size_t n) {
  if (n < 2) throw ParameterError("build_rotation_embedding: n must be >= 2");
  Matrix m = Matrix::identity(n);
  const double h = 1.0 / std::sqrt(2.0);
  m(0, 0) = h;
  m(0, 1) = h;
  m(1, 0) = -h;
  m(1, 1) = h;
  return m;
}

}  // namespace rsd
