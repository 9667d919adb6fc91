#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/linalg/eigen.hpp"
#include "rsd/linalg/matrix.hpp"
#include "rsd/rng.hpp"

namespace rsd {

/// Columns v_1..v_n with unit A-norm and pairwise |v_iᵀAv_j| <= eps.
/// eps = 0 means an exactly A-conjugate (A-orthonormal) system.
class ConjugateSystem {
 public:
  static constexpr double kSlack = 1e-10;

  ConjugateSystem(const SymmetricMatrix& a, Matrix directions, double eps)
      : directions_(std::move(directions)), eps_(eps) {
    if (eps < 0.0) throw ParameterError("conjugate system tolerance must be nonnegative");
    require_same_size(directions_.rows(), a.n(), "ConjugateSystem");
    const Matrix gram = gram_matrix(a);
    for (std::size_t i = 0; i < gram.rows(); ++i) {
      if (!(std::abs(gram(i, i) - 1.0) <= kSlack)) {
        throw ValidationError("conjugate system column " + std::to_string(i) +
                              " does not have unit A-norm");
      }
      for (std::size_t j = 0; j < gram.cols(); ++j) {
        if (i != j && !(std::abs(gram(i, j)) <= eps + kSlack)) {
          throw ValidationError("conjugate system columns " + std::to_string(i) + "," +
                                std::to_string(j) + " exceed the conjugacy tolerance");
        }
      }
    }
  }

  const Matrix& directions() const { return directions_; }
  double eps() const { return eps_; }
  std::size_t size() const { return directions_.cols(); }
  std::size_t dimension() const { return directions_.rows(); }
  Vector direction(std::size_t i) const { return directions_.column(i); }

  std::vector<Vector> columns() const {
    std::vector<Vector> c;
    c.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) c.push_back(direction(i));
    return c;
  }

  /// SᵀAS.
  Matrix gram_matrix(const SymmetricMatrix& a) const {
    return transpose_times(directions_, a.matrix() * directions_);
  }

 private:
  Matrix directions_;
  double eps_;
};

/// Gram-Schmidt in the A-inner product (two passes per column). `basis`
/// holds the input vectors as columns.
inline ConjugateSystem a_gram_schmidt(const SymmetricMatrix& a, const Matrix& basis) {
  require_same_size(basis.rows(), a.n(), "a_gram_schmidt");
  std::vector<Vector> out;
  out.reserve(basis.cols());
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    Vector v = basis.column(j);
    const double original = std::sqrt(std::max(0.0, a_norm_sq(a, v)));
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : out) axpy(-a_inner(a, q, v), q, v);
    }
    const double nrm = std::sqrt(std::max(0.0, a_norm_sq(a, v)));
    if (!(nrm >= 1e-12 * original) || nrm == 0.0) {
      throw DegenerateBasisError("a_gram_schmidt: basis vector " + std::to_string(j) +
                                 " is linearly dependent on its predecessors");
    }
    for (double& x : v) x /= nrm;
    out.push_back(std::move(v));
  }
  return ConjugateSystem(a, Matrix::from_columns(out), 0.0);
}

/// Unit-diagonal symmetric matrix with off-diagonal entries drawn from
/// U[-eps, eps]; resampled until positive definite.
inline SymmetricMatrix sample_perturbed_identity(std::size_t n, double eps, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix m = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = rng.uniform(-eps, eps);
        m(i, j) = v;
        m(j, i) = v;
      }
    SymmetricMatrix s(std::move(m));
    if (jacobi_eigendecompose(s).min() > 0.0) return s;
  }
  throw ValidationError("sample_perturbed_identity: no positive definite sample in 100 attempts");
}

/// ε-approximate A-conjugate system S = A^{-1/2}·V·Ĩ^{1/2} with V random
/// orthogonal and Ĩ a unit-diagonal perturbation of the identity, so that SᵀAS = Ĩ.
inline ConjugateSystem approx_conjugate_system(const SymmetricMatrix& a, double eps, Rng& rng) {
  const std::size_t n = a.n();
  if (eps < 0.0) throw ParameterError("approx_conjugate_system: eps must be nonnegative");
  if (n > 1 && !(eps * static_cast<double>(n - 1) < 1.0)) {
    throw ParameterError("approx_conjugate_system: eps must satisfy eps < 1/(n-1) = " +
                         std::to_string(1.0 / static_cast<double>(n - 1)));
  }
  const SpectralDecomposition d = jacobi_eigendecompose(a);
  if (!(d.min() > 0.0)) throw DomainError("approx_conjugate_system: A must be positive definite");
  const SymmetricMatrix inv_sqrt = matrix_power(d, -0.5);
  const Matrix v = sample_random_orthogonal(n, rng);
  const SymmetricMatrix gram = sample_perturbed_identity(n, eps, rng);
  const SymmetricMatrix gram_sqrt = matrix_power(jacobi_eigendecompose(gram), 0.5);
  Matrix s = inv_sqrt.matrix() * v * gram_sqrt.matrix();
  // Remove the rounding drift of the unit A-norm constraint.
  for (std::size_t j = 0; j < n; ++j) {
    Vector c = s.column(j);
    const double nrm = std::sqrt(a_norm_sq(a, c));
    for (double& x : c) x /= nrm;
    s.set_column(j, c);
  }
  return ConjugateSystem(a, std::move(s), eps);
}

}  // namespace rsd
