#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsd/distributions.hpp"
#include "rsd/error.hpp"
#include "rsd/linalg.hpp"
#include "rsd/rng.hpp"
#include "rsd/theory/operators.hpp"

namespace rsd {

/// min ½xᵀAx − bᵀx for positive definite A; x_* = A⁻¹b is computed once.
class QuadraticProblem {
 public:
  QuadraticProblem(SymmetricMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    require_same_size(a_.n(), b_.size(), "QuadraticProblem");
    x_star_ = solve_spd(a_, b_);
    residual_at_solution_ = subtract(a_ * x_star_, b_);
    if (!(max_abs(residual_at_solution_) <= 1e-8 * (1.0 + max_abs(b_)))) {
      throw ValidationError("QuadraticProblem: solution residual too large (ill-conditioned A)");
    }
  }

  const SymmetricMatrix& A() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& x_star() const { return x_star_; }
  std::size_t n() const { return a_.n(); }

  /// A·x_* − b, the rounding residual of the stored solution.
  const Vector& residual_at_solution() const { return residual_at_solution_; }

  double error(std::span<const double> x) const { return a_norm_sq(a_, subtract(x, x_star_)); }

  double objective(std::span<const double> x) const {
    return 0.5 * a_norm_sq(a_, x) - dot(b_, x);
  }

 private:
  SymmetricMatrix a_;
  Vector b_;
  Vector x_star_;
  Vector residual_at_solution_;
};

struct SolverConfig {
  double omega = 1.0;
  std::size_t tau = 1;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  /// Starting point; when empty, x_0 = x_* + g/‖g‖_A with g standard normal
  /// drawn from the run's generator before any direction is sampled.
  std::optional<Vector> x0;
};

struct ConvergenceTrace {
  /// ‖x_t − x_*‖²_A for t = 0..iterations.
  std::vector<double> errors;
  Vector x0;
  Vector final_iterate;
};

constexpr double kDegenerateDirectionFloor = 1e-14;

/// One stochastic-descent step along s with relaxation omega.
inline Vector sd_step(const QuadraticProblem& problem, std::span<const double> x,
                      std::span<const double> s, double omega) {
  const double sas = a_norm_sq(problem.A(), s);
  if (!(sas > kDegenerateDirectionFloor)) {
    throw DegenerateDirectionError("sd_step: direction has sᵀAs <= 1e-14");
  }
  const Vector r = subtract(problem.A() * x, problem.b());
  const double h = -omega * dot(s, r) / sas;
  Vector next(x.begin(), x.end());
  axpy(h, s, next);
  return next;
}

/// Spectral step x − (uᵀx − uᵀb/λ)·u.
inline Vector ssd_step(std::span<const double> x, std::span<const double> u, double lambda,
                       std::span<const double> b) {
  if (!(lambda > 0.0)) throw DomainError("ssd_step: eigenvalue must be positive");
  const double h = -(dot(u, x) - dot(u, b) / lambda);
  Vector next(x.begin(), x.end());
  axpy(h, u, next);
  return next;
}

/// λ = wᵀAw, the eigenvalue estimate minimizing ‖Aw − λw‖.
inline double optimal_inexact_eigenvalue(const SymmetricMatrix& a, std::span<const double> w) {
  if (!(std::abs(norm2(w) - 1.0) <= 1e-10)) {
    throw ValidationError("optimal_inexact_eigenvalue: w must have unit norm");
  }
  return a_norm_sq(a, w);
}

/// ε = Aw − λw.
inline Vector inexact_residual(const SymmetricMatrix& a, std::span<const double> w, double lambda) {
  Vector e = a * w;
  axpy(-lambda, w, e);
  return e;
}

struct InexactEigenpair {
  Vector w;
  double lambda;
};

/// x = S·Sᵀ·b; exact when the system is exactly A-conjugate.
inline Vector direct_conjugate_solve(const ConjugateSystem& system, std::span<const double> b) {
  if (system.size() != system.dimension()) {
    throw DimensionError("direct_conjugate_solve: system must have n columns");
  }
  const Matrix& s = system.directions();
  require_same_size(s.rows(), b.size(), "direct_conjugate_solve");
  Vector coeff(s.cols(), 0.0);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) coeff[j] += s(i, j) * b[i];
  return s * coeff;
}

namespace detail {

inline Vector default_start(const QuadraticProblem& problem, Rng& rng) {
  Vector g(problem.n());
  for (double& v : g) v = rng.normal();
  const double nrm = std::sqrt(a_norm_sq(problem.A(), g));
  Vector x0 = problem.x_star();
  axpy(1.0 / nrm, g, x0);
  return x0;
}

inline Vector resolve_start(const QuadraticProblem& problem, const SolverConfig& config, Rng& rng) {
  if (config.x0) {
    require_same_size(config.x0->size(), problem.n(), "solver x0");
    return *config.x0;
  }
  return default_start(problem, rng);
}

/// Directions with their images under A, plus the coordinate index when a
/// direction is a standard basis vector (used to skip the dense products).
struct PreparedDirections {
  std::vector<Vector> s;
  std::vector<Vector> as;
  std::vector<double> sas;
  std::vector<long> coordinate;

  PreparedDirections(const SymmetricMatrix& a, const std::vector<Vector>& dirs) {
    for (const Vector& d : dirs) {
      require_same_size(d.size(), a.n(), "solver direction");
      s.push_back(d);
      as.push_back(a * d);
      sas.push_back(dot(d, as.back()));
      long idx = -1;
      std::size_t nnz = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] != 0.0) {
          ++nnz;
          idx = static_cast<long>(i);
        }
      }
      coordinate.push_back(nnz == 1 && d[static_cast<std::size_t>(idx)] == 1.0 ? idx : -1);
    }
  }

  double dot_s(std::size_t j, std::span<const double> v) const {
    return coordinate[j] >= 0 ? v[static_cast<std::size_t>(coordinate[j])] : dot(s[j], v);
  }
};

/// Shared iteration loop. The state is the iterate x and its residual
/// r = Ax − b, updated incrementally and recomputed exactly every n steps.
/// `step(j, x, r)` returns the scalar h of the update x ← x + h·s_j; with
/// tau > 1 the tau updates computed at the same x are averaged.
template <class DrawIndex, class StepSize>
ConvergenceTrace run_engine(const QuadraticProblem& problem, const PreparedDirections& dirs,
                            std::size_t tau, std::size_t iterations, Vector x0,
                            DrawIndex&& draw, StepSize&& step) {
  const std::size_t n = problem.n();
  const SymmetricMatrix& a = problem.A();
  const Vector& x_star = problem.x_star();
  const Vector& r_star = problem.residual_at_solution();

  ConvergenceTrace trace;
  trace.errors.reserve(iterations + 1);
  trace.x0 = x0;
  Vector x = std::move(x0);
  Vector r = subtract(a * x, problem.b());
  Vector dx(n), dr(n);
  const double inv_tau = 1.0 / static_cast<double>(tau);

  trace.errors.push_back(a_norm_sq(a, subtract(x, x_star)));
  for (std::size_t t = 1; t <= iterations; ++t) {
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dr.begin(), dr.end(), 0.0);
    for (std::size_t i = 0; i < tau; ++i) {
      const std::size_t j = draw();
      const double h = step(j, x, r);
      if (dirs.coordinate[j] >= 0) {
        dx[static_cast<std::size_t>(dirs.coordinate[j])] += h;
      } else {
        axpy(h, dirs.s[j], dx);
      }
      axpy(h, dirs.as[j], dr);
    }
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dx[i] * inv_tau;
      r[i] += dr[i] * inv_tau;
    }
    if (t % n == 0) r = subtract(a * x, problem.b());

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += (x[i] - x_star[i]) * (r[i] - r_star[i]);
    if (err < 0.0) err = std::max(0.0, a_norm_sq(a, subtract(x, x_star)));
    trace.errors.push_back(err);
  }
  trace.final_iterate = std::move(x);
  return trace;
}

inline void validate_sd_config(const QuadraticProblem& problem, const DirectionDistribution& dist,
                               const SolverConfig& config) {
  require_same_size(dist.dimension(), problem.n(), "run_sd distribution");
  if (config.tau < 1) throw ConfigError("mini-batch size tau must be >= 1");
  if (!is_proper(problem.A(), dist)) {
    throw ConfigError("distribution '" + dist.label() + "' is not proper with respect to A");
  }
  if (config.tau == 1) {
    if (!(config.omega > 0.0 && config.omega < 2.0)) {
      throw ConfigError("stepsize omega must satisfy 0 < omega < 2");
    }
    return;
  }
  const double lmax = extreme_eigenvalues(w_matrix(problem.A(), dist)).max;
  const double inv_tau = 1.0 / static_cast<double>(config.tau);
  const double xi = inv_tau + (1.0 - inv_tau) * lmax;
  if (!(config.omega > 0.0 && config.omega < 2.0 / xi)) {
    throw ConfigError("stepsize omega must satisfy 0 < omega < 2/xi(tau) = " +
                      std::to_string(2.0 / xi));
  }
}

/// Stochastic descent on an already validated configuration.
inline ConvergenceTrace run_sd_unchecked(const QuadraticProblem& problem,
                                         const DirectionDistribution& dist,
                                         const PreparedDirections& prepared,
                                         const SolverConfig& config, Rng& rng) {
  Vector x0 = resolve_start(problem, config, rng);
  for (double sas : prepared.sas) {
    if (!(sas > kDegenerateDirectionFloor)) {
      throw DegenerateDirectionError("run_sd: direction has sᵀAs <= 1e-14");
    }
  }
  const double omega = config.omega;
  return run_engine(
      problem, prepared, config.tau, config.iterations, std::move(x0),
      [&] { return dist.sample_index(rng); },
      [&](std::size_t j, const Vector&, const Vector& r) {
        return -omega * prepared.dot_s(j, r) / prepared.sas[j];
      });
}

}  // namespace detail

/// Stochastic descent: sample s ~ D, x ← x − ω·sᵀ(Ax − b)/(sᵀAs)·s.
inline ConvergenceTrace run_sd(const QuadraticProblem& problem, const DirectionDistribution& dist,
                               const SolverConfig& config, Rng& rng) {
  SolverConfig single = config;
  single.tau = 1;
  detail::validate_sd_config(problem, dist, single);
  const detail::PreparedDirections prepared(problem.A(), dist.directions());
  return detail::run_sd_unchecked(problem, dist, prepared, single, rng);
}

inline ConvergenceTrace run_sd(const QuadraticProblem& problem, const DirectionDistribution& dist,
                               const SolverConfig& config) {
  Rng rng(config.seed);
  return run_sd(problem, dist, config, rng);
}

/// Mini-batch stochastic descent: tau steps from the same iterate, averaged.
/// Samples are drawn sequentially from one stream, so tau = 1 reproduces run_sd.
inline ConvergenceTrace run_minibatch_sd(const QuadraticProblem& problem,
                                         const DirectionDistribution& dist,
                                         const SolverConfig& config, Rng& rng) {
  detail::validate_sd_config(problem, dist, config);
  const detail::PreparedDirections prepared(problem.A(), dist.directions());
  return detail::run_sd_unchecked(problem, dist, prepared, config, rng);
}

inline ConvergenceTrace run_minibatch_sd(const QuadraticProblem& problem,
                                         const DirectionDistribution& dist,
                                         const SolverConfig& config) {
  Rng rng(config.seed);
  return run_minibatch_sd(problem, dist, config, rng);
}

/// Inexact stochastic conjugate descent: x ← x − v_iᵀ(Ax − b)·v_i with i uniform.
inline ConvergenceTrace run_iscond(const QuadraticProblem& problem, const ConjugateSystem& system,
                                   const SolverConfig& config, Rng& rng) {
  require_same_size(system.dimension(), problem.n(), "run_iscond");
  const DirectionDistribution uniform = conjugate_distribution(system);
  const detail::PreparedDirections prepared(problem.A(), uniform.directions());
  Vector x0 = detail::resolve_start(problem, config, rng);
  return detail::run_engine(
      problem, prepared, 1, config.iterations, std::move(x0),
      [&] { return uniform.sample_index(rng); },
      [&](std::size_t j, const Vector&, const Vector& r) { return -prepared.dot_s(j, r); });
}

inline ConvergenceTrace run_iscond(const QuadraticProblem& problem, const ConjugateSystem& system,
                                   const SolverConfig& config) {
  Rng rng(config.seed);
  return run_iscond(problem, system, config, rng);
}

/// Inexact stochastic spectral descent: x ← x − (w_iᵀx − w_iᵀb/λ_i)·w_i with i uniform.
inline ConvergenceTrace run_issd(const QuadraticProblem& problem,
                                 const std::vector<InexactEigenpair>& pairs,
                                 const SolverConfig& config, Rng& rng) {
  if (pairs.empty()) throw ConfigError("run_issd: no eigenpairs given");
  std::vector<Vector> dirs;
  std::vector<double> shift;
  for (const auto& p : pairs) {
    require_same_size(p.w.size(), problem.n(), "run_issd eigenvector");
    if (!(p.lambda > 0.0)) throw DomainError("run_issd: eigenvalue estimates must be positive");
    if (!(std::abs(norm2(p.w) - 1.0) <= 1e-10)) {
      throw ValidationError("run_issd: eigenvector estimates must have unit norm");
    }
    dirs.push_back(p.w);
    shift.push_back(dot(p.w, problem.b()) / p.lambda);
  }
  const DirectionDistribution uniform(dirs, uniform_probabilities(dirs.size()), "issd");
  const detail::PreparedDirections prepared(problem.A(), dirs);
  Vector x0 = detail::resolve_start(problem, config, rng);
  return detail::run_engine(
      problem, prepared, 1, config.iterations, std::move(x0),
      [&] { return uniform.sample_index(rng); },
      [&](std::size_t j, const Vector& x, const Vector&) {
        return -(prepared.dot_s(j, x) - shift[j]);
      });
}

inline ConvergenceTrace run_issd(const QuadraticProblem& problem,
                                 const std::vector<InexactEigenpair>& pairs,
                                 const SolverConfig& config) {
  Rng rng(config.seed);
  return run_issd(problem, pairs, config, rng);
}

}  // namespace rsd
