#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rsd/distribution.hpp"
#include "rsd/error.hpp"
#include "rsd/linalg.hpp"
#include "rsd/theory/operators.hpp"

namespace rsd {

/// Coordinate directions e_i with probabilities p_i (randomized coordinate descent).
inline DirectionDistribution coordinate_distribution(const SymmetricMatrix& a,
                                                     std::vector<double> p,
                                                     std::string label = "coordinate") {
  require_same_size(p.size(), a.n(), "coordinate_distribution");
  std::vector<Vector> dirs;
  dirs.reserve(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) dirs.push_back(unit_vector(a.n(), i));
  return DirectionDistribution(std::move(dirs), std::move(p), std::move(label));
}

inline std::vector<double> uniform_probabilities(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

/// p_i = A_ii / Tr(A).
inline std::vector<double> diagonal_probabilities(const SymmetricMatrix& a) {
  std::vector<double> p = a.diagonal_entries();
  const double tr = a.trace();
  for (double& v : p) v /= tr;
  return p;
}

/// p_i = ‖A_{i:}‖² / Tr(AᵀA).
inline std::vector<double> rownorm_probabilities(const SymmetricMatrix& a) {
  std::vector<double> p(a.n());
  double total = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    p[i] = dot(a.row(i), a.row(i));
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

/// Uniform over the eigenvectors of A.
inline DirectionDistribution uniform_spectral_distribution(const SpectralDecomposition& d) {
  std::vector<Vector> dirs;
  for (std::size_t i = 0; i < d.n(); ++i) dirs.push_back(d.eigenvector(i));
  return DirectionDistribution(std::move(dirs), uniform_probabilities(d.n()), "spectral");
}

/// Uniform over the columns of a (possibly approximate) conjugate system.
inline DirectionDistribution conjugate_distribution(const ConjugateSystem& system) {
  if (system.size() != system.dimension()) {
    throw DimensionError("conjugate_distribution: system must have n columns");
  }
  return DirectionDistribution(system.columns(), uniform_probabilities(system.size()),
                               "conjugate");
}

/// Parameters of the spectrally augmented coordinate family: coordinates
/// weighted by alpha·A_ii and k eigenvectors weighted by beta_i, all over
/// the normalizer C_k = alpha·Tr(A) + Σ beta_i.
struct SscdParams {
  std::size_t k = 0;
  double alpha = 1.0;
  std::vector<double> betas;
  double normalizer = 0.0;
};

inline SscdParams make_sscd_params(double trace, double alpha, std::vector<double> betas) {
  SscdParams p;
  p.k = betas.size();
  p.alpha = alpha;
  p.normalizer = alpha * trace + std::accumulate(betas.begin(), betas.end(), 0.0);
  p.betas = std::move(betas);
  return p;
}

/// alpha = 1, beta_i = λ_{k+1} − λ_i, the rate-optimal member of the family.
inline SscdParams sscd_optimal_params(std::span<const double> eigenvalues, std::size_t k) {
  const std::size_t n = eigenvalues.size();
  if (n == 0 || k > n - 1) {
    throw ParameterError("sscd_optimal_params: k must lie in [0, n-1], got " + std::to_string(k));
  }
  SscdParams p;
  p.k = k;
  p.alpha = 1.0;
  const double pivot = eigenvalues[k];
  for (std::size_t i = 0; i < k; ++i) p.betas.push_back(pivot - eigenvalues[i]);
  double c = static_cast<double>(k + 1) * pivot;
  for (std::size_t i = k + 1; i < n; ++i) c += eigenvalues[i];
  p.normalizer = c;
  return p;
}

namespace detail {

inline void validate_family_params(double trace, double alpha, std::span<const double> betas,
                                   double normalizer, const char* what) {
  if (!(alpha > 0.0)) throw ValidationError(std::string(what) + ": alpha must be positive");
  double expected = alpha * trace;
  for (double b : betas) {
    if (!(b >= 0.0)) throw ValidationError(std::string(what) + ": betas must be nonnegative");
    expected += b;
  }
  if (!(std::abs(normalizer - expected) <= 1e-10 * std::abs(expected))) {
    throw ValidationError(std::string(what) + ": normalizer " + std::to_string(normalizer) +
                          " is inconsistent with alpha*Tr(A) + sum(betas) = " +
                          std::to_string(expected));
  }
}

/// Coordinates plus selected eigenvectors; zero-probability directions are dropped.
inline DirectionDistribution augmented_coordinates(const SymmetricMatrix& a,
                                                   const SpectralDecomposition& d, double alpha,
                                                   std::span<const double> betas,
                                                   std::size_t first_eigenvector,
                                                   double normalizer, std::string label) {
  const std::size_t n = a.n();
  std::vector<Vector> dirs;
  std::vector<double> probs;
  for (std::size_t i = 0; i < n; ++i) {
    dirs.push_back(unit_vector(n, i));
    probs.push_back(alpha * a(i, i) / normalizer);
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (betas[i] == 0.0) continue;
    dirs.push_back(d.eigenvector(first_eigenvector + i));
    probs.push_back(betas[i] / normalizer);
  }
  return DirectionDistribution(std::move(dirs), std::move(probs), std::move(label));
}

}  // namespace detail

/// Coordinates e_i with probability alpha·A_ii/C_k and the eigenvectors of
/// the k smallest eigenvalues with probability beta_i/C_k.
inline DirectionDistribution sscd_distribution(const SymmetricMatrix& a,
                                               const SpectralDecomposition& d,
                                               const SscdParams& params) {
  require_same_size(a.n(), d.n(), "sscd_distribution");
  if (params.k > a.n() - 1) throw ParameterError("sscd_distribution: k must lie in [0, n-1]");
  require_same_size(params.betas.size(), params.k, "sscd_distribution betas");
  detail::validate_family_params(a.trace(), params.alpha, params.betas, params.normalizer,
                                 "sscd_distribution");
  return detail::augmented_coordinates(a, d, params.alpha, params.betas, 0, params.normalizer,
                                       "sscd");
}

/// Coordinates augmented with the eigenvectors u_{k+1}..u_n of the largest
/// eigenvalues; `betas` has n − k entries.
inline DirectionDistribution largest_eig_distribution(const SymmetricMatrix& a,
                                                      const SpectralDecomposition& d,
                                                      std::size_t k, double alpha,
                                                      std::span<const double> betas) {
  require_same_size(a.n(), d.n(), "largest_eig_distribution");
  if (k > a.n()) throw ParameterError("largest_eig_distribution: k must lie in [0, n]");
  require_same_size(betas.size(), a.n() - k, "largest_eig_distribution betas");
  const double normalizer = alpha * a.trace() + std::accumulate(betas.begin(), betas.end(), 0.0);
  detail::validate_family_params(a.trace(), alpha, betas, normalizer, "largest_eig_distribution");
  return detail::augmented_coordinates(a, d, alpha, betas, k, normalizer, "sscd-largest");
}

constexpr double kPropernessThreshold = 1e-12;

/// True iff E[H] is (numerically) invertible: λ_min(E[H]) > 1e-12.
inline bool is_proper(const SymmetricMatrix& a, const DirectionDistribution& dist) {
  require_same_size(a.n(), dist.dimension(), "is_proper");
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (!(a_norm_sq(a, dist.direction(k)) > 0.0)) {
      throw DegenerateDirectionError("is_proper: direction " + std::to_string(k) +
                                     " has sᵀAs <= 0");
    }
  }
  return eigenvalues(expected_H(a, dist)).front() > kPropernessThreshold;
}

}  // namespace rsd
