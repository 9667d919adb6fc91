#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/linalg.hpp"
#include "rsd/solvers.hpp"

namespace rsd {

/// Guarantees for an ε-approximate A-conjugate system S of n vectors:
/// the spectrum of A^{1/2}SSᵀA^{1/2} lies in [lambda_min_lb, lambda_max_ub].
struct InexactBoundReport {
  double eps = 0.0;
  double lambda_min_lb = 1.0;
  double lambda_max_ub = 1.0;
  /// Condition-number bound; +inf when eps >= (√2 − 1)/(n − 1).
  double cond_ub = 1.0;
  /// ‖SSᵀb − x_*‖_A <= direct_solve_rel_err_ub · ‖x_*‖_A.
  double direct_solve_rel_err_ub = 0.0;
};

inline InexactBoundReport inexact_gram_bounds(std::size_t n, double eps) {
  if (n < 1) throw ParameterError("inexact_gram_bounds: n must be >= 1");
  if (!(eps >= 0.0)) throw ParameterError("inexact_gram_bounds: eps must be nonnegative");
  const double m = eps * static_cast<double>(n - 1);
  if (!(m < 1.0)) {
    throw ParameterError("inexact_gram_bounds: requires eps*(n-1) < 1 (eps < 1/(n-1)), got eps*(n-1) = " +
                         std::to_string(m));
  }
  InexactBoundReport r;
  r.eps = eps;
  const double dev = m * (1.0 + m) / (1.0 - m);
  r.lambda_min_lb = 1.0 - dev;
  r.lambda_max_ub = 1.0 + dev;
  r.direct_solve_rel_err_ub = dev;
  const double denom = 1.0 - 2.0 * m - m * m;
  r.cond_ub = m < std::sqrt(2.0) - 1.0 && denom > 0.0 ? (1.0 + m * m) / denom
                                                       : std::numeric_limits<double>::infinity();
  return r;
}

/// Stationary error level of inexact spectral descent: the expected squared
/// A-norm error keeps decreasing while it exceeds r0/(1 − q).
struct IssdNeighborhood {
  double q = 0.0;
  double r0 = 0.0;
  double limit = 0.0;
  bool finite = true;
};

/// S = [w_i], Λ = diag(λ_i), E = [Aw_i − λ_i w_i], Î = SSᵀ,
/// Q = (I − Î)A − SEᵀ + EΛ⁻¹Eᵀ, q = max zᵀQz/zᵀAz, r0 = 2‖x_*‖²_{EΛ⁻¹Eᵀ}.
/// Requires the optimal estimates λ_i = w_iᵀAw_i, which make w_iᵀε_i vanish.
inline IssdNeighborhood issd_neighborhood(const QuadraticProblem& problem,
                                          const std::vector<InexactEigenpair>& pairs) {
  const SymmetricMatrix& a = problem.A();
  const std::size_t n = a.n();
  if (pairs.size() != n) throw DimensionError("issd_neighborhood: need n eigenpairs");
  Matrix s(n, n), e(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = pairs[i];
    require_same_size(p.w.size(), n, "issd_neighborhood");
    if (!(p.lambda > 0.0)) throw DomainError("issd_neighborhood: eigenvalues must be positive");
    const Vector eps_i = inexact_residual(a, p.w, p.lambda);
    if (!(std::abs(dot(p.w, eps_i)) <= 1e-10 * std::max(1.0, a.max_abs()))) {
      throw ValidationError("issd_neighborhood: eigenvalue " + std::to_string(i) +
                            " is not the optimal estimate w_iᵀAw_i");
    }
    s.set_column(i, p.w);
    e.set_column(i, eps_i);
  }
  Matrix e_scaled = e;  // E·Λ⁻¹
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e_scaled(i, j) /= pairs[j].lambda;
  const Matrix sigma = e_scaled * e.transposed();  // EΛ⁻¹Eᵀ
  const Matrix i_hat = s * s.transposed();
  const Matrix q_mat = (Matrix::identity(n) - i_hat) * a.matrix() - s * e.transposed() + sigma;

  const SymmetricMatrix inv_sqrt = matrix_power(jacobi_eigendecompose(a), -0.5);
  const SymmetricMatrix q_sym = SymmetricMatrix::symmetrize(0.5 * (q_mat + q_mat.transposed()));
  const SymmetricMatrix pencil =
      SymmetricMatrix::symmetrize(inv_sqrt.matrix() * q_sym.matrix() * inv_sqrt.matrix());

  IssdNeighborhood out;
  out.q = eigenvalues(pencil).back();
  const Vector& xs = problem.x_star();
  out.r0 = 2.0 * dot(xs, sigma * xs);
  if (out.q < 1.0) {
    out.limit = out.r0 / (1.0 - out.q);
  } else {
    out.finite = false;
    out.limit = std::numeric_limits<double>::infinity();
  }
  return out;
}

/// Unit-norm perturbations of the exact eigenvectors paired with their
/// optimal eigenvalue estimates w_iᵀAw_i.
inline std::vector<InexactEigenpair> perturbed_eigenpairs(const SymmetricMatrix& a,
                                                          const SpectralDecomposition& d,
                                                          double perturbation, Rng& rng) {
  std::vector<InexactEigenpair> pairs;
  for (std::size_t i = 0; i < d.n(); ++i) {
    Vector w = d.eigenvector(i);
    for (double& v : w) v += perturbation * rng.normal();
    const double nrm = norm2(w);
    for (double& v : w) v /= nrm;
    const double lambda = optimal_inexact_eigenvalue(a, w);
    pairs.push_back({std::move(w), lambda});
  }
  return pairs;
}

}  // namespace rsd
