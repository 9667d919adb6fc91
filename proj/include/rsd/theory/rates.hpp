#pragma once

#include <cmath>
#include <span>
#include <string>

#include "rsd/distributions.hpp"
#include "rsd/error.hpp"
#include "rsd/theory/operators.hpp"

namespace rsd {

/// Extreme eigenvalues of W and the per-step contraction factors bracketing
/// E‖x_t − x_*‖²_A for fixed omega.
struct RateReport {
  double lambda_min_W = 0.0;
  double lambda_max_W = 0.0;
  /// 1 − ω(2−ω)λ_max(W): the expected error can decay no faster than this.
  double contraction_lower = 0.0;
  /// 1 − ω(2−ω)λ_min(W): the expected error decays at least this fast.
  double contraction_upper = 0.0;
  double iteration_complexity = 0.0;
};

inline RateReport rate_report_from_extremes(double lmin, double lmax, double omega) {
  if (!(omega > 0.0 && omega < 2.0)) throw ParameterError("rate_report: omega must lie in (0, 2)");
  if (!(lmin > 0.0)) throw ConfigError("rate_report: distribution is not proper (λ_min(W) <= 0)");
  const double g = omega * (2.0 - omega);
  return {lmin, lmax, 1.0 - g * lmax, 1.0 - g * lmin, 1.0 / lmin};
}

inline RateReport rate_report(const SymmetricMatrix& a, const DirectionDistribution& dist,
                              double omega = 1.0) {
  if (!is_proper(a, dist)) throw ConfigError("rate_report: distribution is not proper");
  const auto ext = extreme_eigenvalues(w_matrix(a, dist));
  return rate_report_from_extremes(ext.min, ext.max, omega);
}

struct SpectralRate {
  /// Per-step expected decrease factor is 1 − rate.
  double rate = 0.0;
  double contraction = 0.0;
  /// 1/rate, the iteration count constant without the log(1/ε) factor.
  double complexity = 0.0;
};

inline SpectralRate spectral_rate_from(double rate) { return {rate, 1.0 - rate, 1.0 / rate}; }

/// (k+1)λ_{k+1} + Σ_{i>k+1} λ_i for ascending eigenvalues.
inline double sscd_normalizer(std::span<const double> eigenvalues, std::size_t k) {
  const std::size_t n = eigenvalues.size();
  if (n == 0 || k > n - 1) {
    throw ParameterError("k must lie in [0, n-1], got " + std::to_string(k));
  }
  double c = static_cast<double>(k + 1) * eigenvalues[k];
  for (std::size_t i = k + 1; i < n; ++i) c += eigenvalues[i];
  return c;
}

/// Optimal SSCD rate λ_{k+1}/C_k.
inline SpectralRate sscd_rate(std::span<const double> eigenvalues, std::size_t k) {
  const double c = sscd_normalizer(eigenvalues, k);
  return spectral_rate_from(eigenvalues[k] / c);
}

struct MinibatchRate {
  double xi = 0.0;
  double rho = 0.0;
  double omega_opt = 0.0;
  double rho_opt = 0.0;
};

inline double minibatch_xi(double lambda_max_W, std::size_t tau) {
  if (tau < 1) throw ParameterError("mini-batch size tau must be >= 1");
  const double inv = 1.0 / static_cast<double>(tau);
  return inv + (1.0 - inv) * lambda_max_W;
}

/// ξ(τ) = 1/τ + (1 − 1/τ)λ_max(W), ρ(ω,τ) = 1 − ω(2 − ωξ)λ_min(W); the
/// optimal stepsize is 1/ξ with ρ_opt = 1 − λ_min(W)/ξ.
inline MinibatchRate minibatch_rate(double lambda_min_W, double lambda_max_W, double omega,
                                    std::size_t tau) {
  MinibatchRate r;
  r.xi = minibatch_xi(lambda_max_W, tau);
  if (!(omega > 0.0 && omega < 2.0 / r.xi)) {
    throw ParameterError("minibatch_rate: omega must lie in (0, 2/xi(tau)) = (0, " +
                         std::to_string(2.0 / r.xi) + ")");
  }
  r.rho = 1.0 - omega * (2.0 - omega * r.xi) * lambda_min_W;
  r.omega_opt = 1.0 / r.xi;
  r.rho_opt = 1.0 - lambda_min_W / r.xi;
  return r;
}

/// λ_{k+1}/F_k with F_k = C_k/τ + (1 − 1/τ)λ_n.
inline SpectralRate msscd_rate(std::span<const double> eigenvalues, std::size_t k, std::size_t tau) {
  if (tau < 1) throw ParameterError("mini-batch size tau must be >= 1");
  const double c = sscd_normalizer(eigenvalues, k);
  const double inv = 1.0 / static_cast<double>(tau);
  const double f = inv * c + (1.0 - inv) * eigenvalues.back();
  return spectral_rate_from(eigenvalues[k] / f);
}

}  // namespace rsd
