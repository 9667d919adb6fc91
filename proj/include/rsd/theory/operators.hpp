#pragma once

#include <string>

#include "rsd/distribution.hpp"
#include "rsd/linalg/eigen.hpp"
#include "rsd/linalg/matrix.hpp"

namespace rsd {

/// E[ssᵀ/(sᵀAs)] over the distribution.
inline SymmetricMatrix expected_H(const SymmetricMatrix& a, const DirectionDistribution& dist) {
  require_same_size(a.n(), dist.dimension(), "expected_H");
  const std::size_t n = a.n();
  Matrix h(n, n);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const Vector& s = dist.direction(k);
    const double sas = a_norm_sq(a, s);
    if (!(sas > 0.0)) {
      throw ValidationError("direction " + std::to_string(k) + " has nonpositive A-norm");
    }
    const double w = dist.probability(k) / sas;
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] == 0.0) continue;
      const double wi = w * s[i];
      for (std::size_t j = 0; j < n; ++j) h(i, j) += wi * s[j];
    }
  }
  return SymmetricMatrix::symmetrize(std::move(h));
}

/// A^{1/2}·E[H]·A^{1/2}, given A^{1/2}.
inline SymmetricMatrix w_matrix(const SymmetricMatrix& a_sqrt, const SymmetricMatrix& a,
                                const DirectionDistribution& dist) {
  const SymmetricMatrix h = expected_H(a, dist);
  return SymmetricMatrix::symmetrize(a_sqrt.matrix() * h.matrix() * a_sqrt.matrix());
}

inline SymmetricMatrix w_matrix(const SymmetricMatrix& a, const DirectionDistribution& dist) {
  return w_matrix(matrix_power(jacobi_eigendecompose(a), 0.5), a, dist);
}

struct ExtremeEigenvalues {
  double min;
  double max;
};

inline ExtremeEigenvalues extreme_eigenvalues(const SymmetricMatrix& m) {
  const Vector ev = eigenvalues(m);
  return {ev.front(), ev.back()};
}

}  // namespace rsd
