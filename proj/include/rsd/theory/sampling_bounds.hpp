#pragma once

#include <cmath>
#include <vector>

#include "rsd/distributions.hpp"
#include "rsd/error.hpp"
#include "rsd/linalg.hpp"
#include "rsd/theory/operators.hpp"

namespace rsd {

/// λ_min(W(p)) for coordinate sampling with probabilities p, by eigensolve.
inline double coordinate_lambda_min(const SymmetricMatrix& a, const SymmetricMatrix& a_sqrt,
                                    const std::vector<double>& p) {
  return extreme_eigenvalues(w_matrix(a_sqrt, a, coordinate_distribution(a, p))).min;
}

/// Upper bound (1/n)(Π λ_k/A_kk)^{1/n} on λ_min(W) valid for every coordinate
/// probability vector. Evaluated in log space.
inline double lambda_min_upper_bound(const SymmetricMatrix& a) {
  const Vector ev = eigenvalues(a);
  const std::size_t n = a.n();
  double log_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(ev[k] > 0.0)) throw DomainError("lambda_min_upper_bound: A must be positive definite");
    log_sum += std::log(ev[k]) - std::log(a(k, k));
  }
  return std::exp(log_sum / static_cast<double>(n)) / static_cast<double>(n);
}

/// 4c/(1+c)², the eigenvalue-to-diagonal product of the rotated leading block.
inline double rotation_block_factor(double c) { return 4.0 * c / ((1.0 + c) * (1.0 + c)); }

/// Largest c in (0, 1] (to bisection accuracy, from below) with
/// 4c/(1+c)² <= (n/T)^n.
inline double bad_matrix_ratio(std::size_t n, double T) {
  if (n < 2) throw ParameterError("construct_bad_matrix_upper: n must be >= 2");
  if (!(T > 0.0)) throw ParameterError("construct_bad_matrix_upper: T must be positive");
  const double target = std::pow(static_cast<double>(n) / T, static_cast<double>(n));
  if (target >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rotation_block_factor(mid) <= target) lo = mid;
    else hi = mid;
  }
  return lo;
}

/// A = M·diag(c, 1, …, 1)·Mᵀ with the 45° rotation embedding M and c small
/// enough that every coordinate sampling has λ_min(W) <= 1/T.
inline SymmetricMatrix construct_bad_matrix_upper(std::size_t n, double T) {
  const double c = bad_matrix_ratio(n, T);
  std::vector<double> lambdas(n, 1.0);
  lambdas[0] = c;
  return matrix_from_spectrum(lambdas, build_rotation_embedding(n));
}

/// diag(t, 1, …, 1): importance sampling by diagonal or squared row norm
/// starves the unit coordinates.
inline SymmetricMatrix importance_counterexample(std::size_t n, double t) {
  if (n < 2) throw ParameterError("importance_counterexample: n must be >= 2");
  if (!(t > 0.0)) throw ParameterError("importance_counterexample: t must be positive");
  std::vector<double> d(n, 1.0);
  d[0] = t;
  return SymmetricMatrix::diagonal(d);
}

/// Closed form of λ_min(W) for n = 2 coordinate sampling with p_1 = p:
/// 1/2 − 1/2·sqrt(1 − 4p(1−p)(1 − c²/(ab))) for A = ((a, c), (c, b)).
inline double lambda_min_2x2(const SymmetricMatrix& a, double p) {
  if (a.n() != 2) throw DimensionError("lambda_min_2x2: A must be 2x2");
  const double aa = a(0, 0), bb = a(1, 1), cc = a(0, 1);
  return 0.5 - 0.5 * std::sqrt(1.0 - 4.0 * p * (1.0 - p) * (1.0 - cc * cc / (aa * bb)));
}

struct GridOptimum {
  double argmax = 0.0;
  double value = 0.0;
};

/// Grid search p ∈ {0.01, …, 0.99} of the eigensolved λ_min(W(p)) for 2×2 A.
inline GridOptimum verify_2d_optimal_probability(const SymmetricMatrix& a) {
  if (a.n() != 2) throw DimensionError("verify_2d_optimal_probability: A must be 2x2");
  const SymmetricMatrix root = matrix_power(jacobi_eigendecompose(a), 0.5);
  GridOptimum best{0.0, -1.0};
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    const double v = coordinate_lambda_min(a, root, {p, 1.0 - p});
    if (v > best.value) best = {p, v};
  }
  return best;
}

}  // namespace rsd
