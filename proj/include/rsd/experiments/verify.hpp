#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rsd/distributions.hpp"
#include "rsd/error.hpp"
#include "rsd/experiments/monte_carlo.hpp"
#include "rsd/experiments/spectra.hpp"
#include "rsd/linalg.hpp"
#include "rsd/solvers.hpp"
#include "rsd/theory.hpp"

namespace rsd {

struct VerifyReport {
  explicit VerifyReport(std::string name) : id(std::move(name)) {}

  std::string id;
  bool passed = true;
  /// Distance from the bound in the favourable direction; negative on failure.
  double margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> lines;

  void note(const std::string& line) { lines.push_back(line); }
  void check(bool ok, double m, const std::string& line) {
    passed = passed && ok;
    margin = std::min(margin, m);
    lines.push_back((ok ? "ok   " : "FAIL ") + line);
  }
};

inline std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

inline std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

/// Two by two positive definite matrix with random diagonal in [0.1, 10]
/// and correlation in (-1, 1).
inline SymmetricMatrix random_spd_2x2(Rng& rng) {
  const double a = rng.uniform(0.1, 10.0), b = rng.uniform(0.1, 10.0);
  const double c = rng.uniform(-0.99, 0.99) * std::sqrt(a * b);
  Matrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  m(0, 1) = m(1, 0) = c;
  return SymmetricMatrix(std::move(m));
}

/// n = 2: the grid maximizer of λ_min(W(p)) sits at p = 1/2.
inline VerifyReport verify_t2(std::size_t instances = 10, std::uint64_t seed = 2) {
  VerifyReport r("T2");
  Rng rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const SymmetricMatrix a = random_spd_2x2(rng);
    const GridOptimum g = verify_2d_optimal_probability(a);
    const double off = std::abs(g.argmax - 0.5);
    const double closed = lambda_min_2x2(a, g.argmax);
    r.check(off <= 0.01 + 1e-12 && std::abs(closed - g.value) <= 1e-9, 0.01 - off,
            fmt("argmax p = %.2f, closed form gap %.2e", g.argmax, std::abs(closed - g.value)));
  }
  return r;
}

/// Diagonal A: uniform probabilities maximize λ_min(W(p)).
inline VerifyReport verify_t3(std::size_t n = 6, std::size_t samples = 500, std::uint64_t seed = 3) {
  VerifyReport r("T3");
  Rng rng(seed);
  std::vector<double> diag(n);
  for (double& d : diag) d = rng.uniform(0.5, 20.0);
  const SymmetricMatrix a = SymmetricMatrix::diagonal(diag);
  const SymmetricMatrix root = matrix_power(jacobi_eigendecompose(a), 0.5);
  const double uniform = coordinate_lambda_min(a, root, uniform_probabilities(n));
  double best = -1.0;
  for (std::size_t i = 0; i < samples; ++i)
    best = std::max(best, coordinate_lambda_min(a, root, random_probabilities(n, rng)));
  const double m = uniform - best;
  r.check(m >= -1e-10, m, fmt("uniform %.6g vs best random %.6g", uniform, best));
  return r;
}

/// diag(t, 1, …, 1): importance sampling slows coordinate descent down.
inline VerifyReport verify_t4(std::size_t n = 5, double t = 100.0) {
  VerifyReport r("T4");
  const SymmetricMatrix a = importance_counterexample(n, t);
  const SymmetricMatrix root = matrix_power(jacobi_eigendecompose(a), 0.5);
  const double uni = coordinate_lambda_min(a, root, uniform_probabilities(n));
  const double diag = coordinate_lambda_min(a, root, diagonal_probabilities(a));
  const double row = coordinate_lambda_min(a, root, rownorm_probabilities(a));
  const double nn = static_cast<double>(n);
  r.check(std::abs(uni - 1.0 / nn) <= 1e-12, 1e-12 - std::abs(uni - 1.0 / nn), fmt("uniform lambda_min(W) = %.6g", uni));
  const double need_diag = (t + nn - 1.0) / nn;
  const double need_row = (t * t + nn - 1.0) / nn;
  r.check(uni / diag >= 20.0 && uni / diag >= need_diag * (1 - 1e-12), uni / diag - need_diag * (1 - 1e-12),
          fmt("uniform/diagonal rate ratio %.4g (needs >= %.4g)", uni / diag, need_diag));
  r.check(uni / row >= 2000.0 && uni / row >= need_row * (1 - 1e-12), uni / row - need_row * (1 - 1e-12),
          fmt("uniform/row-norm rate ratio %.6g (needs >= %.6g)", uni / row, need_row));
  return r;
}

/// Every coordinate sampling on the constructed matrix has λ_min(W) <= 1/T.
inline VerifyReport verify_t5(std::size_t n = 3, double T = 100.0, std::size_t samples = 200,
                              std::uint64_t seed = 5) {
  VerifyReport r("T5");
  const SymmetricMatrix a = construct_bad_matrix_upper(n, T);
  const SymmetricMatrix root = matrix_power(jacobi_eigendecompose(a), 0.5);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i)
    worst = std::max(worst, coordinate_lambda_min(a, root, random_probabilities(n, rng)));
  worst = std::max({worst, coordinate_lambda_min(a, root, uniform_probabilities(n)),
                    coordinate_lambda_min(a, root, diagonal_probabilities(a))});
  const double bound = lambda_min_upper_bound(a);
  r.check(bound <= 1.0 / T * (1 + 1e-12), 1.0 / T - bound, fmt("p-independent bound %.6g vs 1/T = %.6g", bound, 1.0 / T));
  r.check(worst <= 1.0 / T, 1.0 / T - worst, fmt("largest lambda_min(W(p)) %.6g vs 1/T = %.6g", worst, 1.0 / T));
  return r;
}

/// Monte Carlo check of E‖x_t − x_*‖²_A >= (1 − 1/T)^{2t}‖x_0 − x_*‖²_A on
/// the constructed matrix. For each p the start is x_* + A^{-1/2}u where u
/// is the eigenvector of the smallest eigenvalue of W(p).
inline VerifyReport verify_lower_bound(std::size_t n = 3, double T = 50.0, std::size_t t_max = 100,
                                       std::size_t trials = 2000, std::uint64_t seed = 7,
                                       unsigned workers = 0) {
  VerifyReport r("T7");
  const SymmetricMatrix a = construct_bad_matrix_upper(n, T);
  const SpectralDecomposition d = jacobi_eigendecompose(a);
  const SymmetricMatrix root = matrix_power(d, 0.5);
  const SymmetricMatrix inv_root = matrix_power(d, -0.5);
  Rng rng(seed);
  const QuadraticProblem problem(a, random_normal_vector(n, rng));

  std::vector<std::pair<std::string, std::vector<double>>> choices = {
      {"uniform", uniform_probabilities(n)}, {"diagonal", diagonal_probabilities(a)}};
  for (int i = 0; i < 10; ++i) choices.push_back({"random" + std::to_string(i), random_probabilities(n, rng)});

  for (std::size_t c = 0; c < choices.size(); ++c) {
    const auto& [name, p] = choices[c];
    const DirectionDistribution dist = coordinate_distribution(a, p, name);
    const SpectralDecomposition wd = jacobi_eigendecompose(w_matrix(root, a, dist));
    Vector x0 = problem.x_star();
    axpy(1.0, inv_root * wd.eigenvector(0), x0);
    SolverConfig cfg;
    cfg.iterations = t_max;
    cfg.x0 = x0;
    detail::validate_sd_config(problem, dist, cfg);
    const detail::PreparedDirections prepared(a, dist.directions());
    const MeanTrace tr = monte_carlo_trace(
        trials, seed + 1000 * (c + 1), t_max,
        [&](Rng& trial_rng) { return detail::run_sd_unchecked(problem, dist, prepared, cfg, trial_rng); },
        workers);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_t = 0;
    for (std::size_t t = 1; t <= t_max; ++t) {
      const double floor = std::pow(1.0 - 1.0 / T, 2.0 * static_cast<double>(t));
      const double rel_se = tr.mean[t] > 0 ? tr.stderr_[t] / tr.mean[t] : 0.0;
      const double m = (tr.mean[t] - floor * (1.0 - 4.0 * rel_se)) / floor;
      if (m < worst) {
        worst = m;
        worst_t = t;
      }
    }
    r.check(worst >= 0.0, worst,
            name + fmt(": lambda_min(W) = %.4g, tightest relative margin %.3g", wd.eigenvalues[0], worst) +
                " at t=" + std::to_string(worst_t));
  }
  return r;
}

/// Random positive definite instance of random size in [lo_n, hi_n].
inline SymmetricMatrix random_instance(Rng& rng, std::size_t lo_n, std::size_t hi_n) {
  const auto n = lo_n + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(hi_n - lo_n + 1));
  return random_spd(std::min(n, hi_n), rng, 1.0, rng.uniform(2.0, 100.0));
}

/// Coordinates plus the n − k largest eigenvectors, k >= 1, never beat λ_1/Tr(A).
inline VerifyReport verify_last_eigs(std::size_t instances = 20, std::uint64_t seed = 11) {
  VerifyReport r("T-last-eigs");
  Rng rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const SymmetricMatrix a = random_instance(rng, 3, 12);
    const std::size_t n = a.n();
    const SpectralDecomposition d = jacobi_eigendecompose(a);
    const auto k = 1 + rng.uniform_index(n);
    std::vector<double> betas(n - k);
    for (double& b : betas) b = rng.uniform(0.0, 2.0 * d.max());
    const double alpha = rng.uniform(0.05, 3.0);
    const DirectionDistribution dist = largest_eig_distribution(a, d, k, alpha, betas);
    const double lmin = extreme_eigenvalues(w_matrix(a, dist)).min;
    const double bound = d.eigenvalues[0] / a.trace();
    r.check(lmin <= bound + 1e-10, bound + 1e-10 - lmin,
            "n=" + std::to_string(n) + " k=" + std::to_string(k) + fmt(": lambda_min(W) %.6g <= %.6g", lmin, bound));
  }
  return r;
}

/// λ_min(W(p)) <= (1/n)(Π λ_k/A_kk)^{1/n} for random (A, p).
inline VerifyReport verify_coordinate_upper_bound(std::size_t instances = 50, std::uint64_t seed = 13) {
  VerifyReport r("L-ineq");
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t i = 0; i < instances; ++i) {
    const SymmetricMatrix a = random_instance(rng, 2, 10);
    const SymmetricMatrix root = matrix_power(jacobi_eigendecompose(a), 0.5);
    const double lmin = coordinate_lambda_min(a, root, random_probabilities(a.n(), rng));
    const double bound = lambda_min_upper_bound(a);
    ok = ok && lmin <= bound + 1e-10;
    worst = std::min(worst, bound - lmin);
  }
  r.check(ok, worst, std::to_string(instances) + fmt(" instances, smallest gap bound - lambda_min(W) = %.3g", worst));
  return r;
}

/// ε-approximate conjugate directions keep a linear rate for ε = 1/(3(n−1)).
inline VerifyReport verify_iscond(std::size_t n = 10, std::size_t trials = 2000,
                                  std::size_t iterations = 300, std::uint64_t seed = 17,
                                  unsigned workers = 0) {
  VerifyReport r("iSconD");
  const double nd = static_cast<double>(n);
  const double eps = 1.0 / (3.0 * (nd - 1.0));
  Rng rng(seed);
  const SymmetricMatrix a = random_spd(n, rng, 1.0, 10.0);
  const QuadraticProblem problem(a, random_normal_vector(n, rng));
  const ConjugateSystem system = approx_conjugate_system(a, eps, rng);
  const double lmin = extreme_eigenvalues(w_matrix(a, conjugate_distribution(system))).min;
  const double target = 1.0 / (3.0 * nd);
  r.check(lmin > target, lmin - target, fmt("measured lambda_min(W) = %.6g > %.6g", lmin, target));
  const MeanTrace tr = monte_carlo_trace(
      trials, seed, iterations,
      [&](Rng& trial_rng) {
        SolverConfig cfg;
        cfg.iterations = iterations;
        return run_iscond(problem, system, cfg, trial_rng);
      },
      workers);
  const double allowed = std::pow(1.0 - target, static_cast<double>(iterations)) * 1.5;
  r.check(tr.mean.back() <= allowed, allowed - tr.mean.back(),
          "mean error at t=" + std::to_string(iterations) + fmt(": %.4g <= %.4g", tr.mean.back(), allowed));
  return r;
}

/// Inexact spectral descent settles below r0/(1 − q).
inline VerifyReport verify_issd(std::size_t n = 10, double perturbation = 1e-3, std::size_t trials = 500,
                                std::size_t iterations = 2000, std::size_t tail = 100,
                                std::uint64_t seed = 19, unsigned workers = 0) {
  VerifyReport r("iSSD");
  Rng rng(seed);
  const SymmetricMatrix a = random_spd(n, rng, 1.0, 10.0);
  const QuadraticProblem problem(a, random_normal_vector(n, rng));
  const SpectralDecomposition d = jacobi_eigendecompose(a);
  const auto pairs = perturbed_eigenpairs(a, d, perturbation, rng);
  double orth = 0.0;
  for (const auto& p : pairs) orth = std::max(orth, std::abs(dot(p.w, inexact_residual(a, p.w, p.lambda))));
  r.check(orth <= 1e-12, 1e-12 - orth, fmt("max |w_i^T eps_i| = %.3g", orth));
  const IssdNeighborhood nb = issd_neighborhood(problem, pairs);
  r.check(nb.finite && nb.q < 1.0, 1.0 - nb.q, fmt("q = %.6g, r0 = %.6g", nb.q, nb.r0));
  if (!nb.finite) return r;

  // The default start has ‖x0 − x_*‖²_A = 1, so relative errors are absolute ones.
  const MeanTrace tr = monte_carlo_trace(
      trials, seed, iterations,
      [&](Rng& trial_rng) {
        SolverConfig cfg;
        cfg.iterations = iterations;
        return run_issd(problem, pairs, cfg, trial_rng);
      },
      workers);
  double tail_mean = 0.0;
  for (std::size_t t = iterations + 1 - tail; t <= iterations; ++t) tail_mean += tr.mean[t];
  tail_mean /= static_cast<double>(tail);
  const double allowed = nb.limit * 1.2;
  r.check(tail_mean <= allowed, allowed - tail_mean,
          fmt("tail mean error %.4g <= 1.2 * r0/(1-q) = %.4g", tail_mean, allowed));
  return r;
}

/// ‖SSᵀb − x_*‖_A against the ε-dependent bound.
inline VerifyReport verify_direct_solve(std::size_t n = 10, std::size_t problems = 20,
                                        std::vector<double> eps_list = {0.0, 0.01, 1.0 / 27.0},
                                        std::uint64_t seed = 23) {
  VerifyReport r("direct-solve");
  Rng rng(seed);
  for (double eps : eps_list) {
    const double bound = inexact_gram_bounds(n, eps).direct_solve_rel_err_ub;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < problems; ++i) {
      const SymmetricMatrix a = random_spd(n, rng, 1.0, 10.0);
      const QuadraticProblem problem(a, random_normal_vector(n, rng));
      const ConjugateSystem system = approx_conjugate_system(a, eps, rng);
      const Vector x = direct_conjugate_solve(system, problem.b());
      const double err = std::sqrt(problem.error(x));
      const double scale = std::sqrt(a_norm_sq(a, problem.x_star()));
      worst = std::min(worst, bound * scale + 1e-8 - err);
    }
    r.check(worst >= 0.0, worst, fmt("eps = %.4g: bound factor %.6g", eps, bound));
  }
  return r;
}

inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"T2",          "T3",     "T4",     "T5",  "T7",
                                               "T-last-eigs", "L-ineq", "iSconD", "iSSD", "direct-solve"};
  return ids;
}

inline std::string joined_theorem_ids() {
  std::string s;
  for (const auto& id : theorem_ids()) s += (s.empty() ? "" : ", ") + id;
  return s;
}

/// Runs the verification for `id` with default parameters. When `trials` is
/// set it replaces the Monte Carlo trial count of the stochastic checks.
inline VerifyReport run_verification(const std::string& id, std::uint64_t seed,
                                     std::optional<std::size_t> trials = {}, unsigned workers = 0) {
  if (id == "T2") return verify_t2(10, seed);
  if (id == "T3") return verify_t3(6, 500, seed);
  if (id == "T4") return verify_t4(5, 100.0);
  if (id == "T5") return verify_t5(3, 100.0, 200, seed);
  if (id == "T7") return verify_lower_bound(3, 50.0, 100, trials.value_or(2000), seed, workers);
  if (id == "T-last-eigs") return verify_last_eigs(20, seed);
  if (id == "L-ineq") return verify_coordinate_upper_bound(50, seed);
  if (id == "iSconD") return verify_iscond(10, trials.value_or(2000), 300, seed, workers);
  if (id == "iSSD") return verify_issd(10, 1e-3, trials.value_or(500), 2000, 100, seed, workers);
  if (id == "direct-solve") return verify_direct_solve(10, 20, {0.0, 0.01, 1.0 / 27.0}, seed);
  throw ConfigError("unknown theorem id '" + id + "'; available ids: " + joined_theorem_ids());
}

}  // namespace rsd
