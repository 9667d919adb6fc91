#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rsd/distributions.hpp"
#include "rsd/error.hpp"
#include "rsd/experiments/spectra.hpp"
#include "rsd/linalg.hpp"
#include "rsd/rng.hpp"
#include "rsd/solvers.hpp"
#include "rsd/theory.hpp"

namespace rsd {

/// Per-iteration Monte Carlo mean of ‖x_t − x_*‖²_A / ‖x_0 − x_*‖²_A.
struct MeanTrace {
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t trials = 0;
  /// Some trial started at x_*; its relative error is taken as 0.
  bool degenerate = false;
  std::string method;
  std::size_t k = 0;
  std::size_t tau = 1;
  std::uint64_t seed = 0;

  std::size_t iterations() const { return mean.empty() ? 0 : mean.size() - 1; }
};

/// Trials are grouped into fixed blocks; each block is reduced sequentially
/// and blocks are merged in index order, so the result does not depend on
/// the number of worker threads.
inline constexpr std::size_t kTrialBlock = 16;

inline unsigned default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs `trial(rng)` for every trial index with rng = Rng::derive(master_seed, index).
/// Each call must return a trace of exactly iterations + 1 errors.
template <class TrialFn>
MeanTrace monte_carlo_trace(std::size_t trials, std::uint64_t master_seed, std::size_t iterations,
                            TrialFn&& trial, unsigned workers = 0) {
  if (trials < 1) throw ConfigError("monte_carlo: trials must be >= 1");
  const std::size_t len = iterations + 1;
  const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;

  struct Block {
    std::size_t count = 0;
    std::vector<double> mean, m2;
    bool degenerate = false;
  };
  std::vector<Block> partial(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks || failed.load()) return;
      try {
        Block& blk = partial[b];
        blk.mean.assign(len, 0.0);
        blk.m2.assign(len, 0.0);
        const std::size_t first = b * kTrialBlock;
        const std::size_t last = std::min(trials, first + kTrialBlock);
        for (std::size_t t = first; t < last; ++t) {
          Rng rng = Rng::derive(master_seed, t);
          const ConvergenceTrace tr = trial(rng);
          if (tr.errors.size() != len) throw ConfigError("monte_carlo: trial returned wrong trace length");
          const double e0 = tr.errors.front();
          const bool degenerate = !(e0 > 0.0);
          blk.degenerate = blk.degenerate || degenerate;
          ++blk.count;
          const double cnt = static_cast<double>(blk.count);
          for (std::size_t i = 0; i < len; ++i) {
            const double v = degenerate ? 0.0 : tr.errors[i] / e0;
            const double d = v - blk.mean[i];
            blk.mean[i] += d / cnt;
            blk.m2[i] += d * (v - blk.mean[i]);
          }
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(workers == 0 ? default_worker_count() : workers,
                                      static_cast<unsigned>(blocks)));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  MeanTrace out;
  out.seed = master_seed;
  out.trials = trials;
  std::vector<double> mean(len, 0.0), m2(len, 0.0);
  double count = 0.0;
  for (const Block& blk : partial) {
    out.degenerate = out.degenerate || blk.degenerate;
    const double nb = static_cast<double>(blk.count);
    const double total = count + nb;
    for (std::size_t i = 0; i < len; ++i) {
      const double d = blk.mean[i] - mean[i];
      mean[i] += d * nb / total;
      m2[i] += blk.m2[i] + d * d * count * nb / total;
    }
    count = total;
  }
  out.mean = std::move(mean);
  out.stderr_.assign(len, 0.0);
  if (trials > 1) {
    for (std::size_t i = 0; i < len; ++i) {
      const double var = std::max(0.0, m2[i] / (count - 1.0));
      out.stderr_[i] = std::sqrt(var / count);
    }
  }
  return out;
}

/// One method of an experiment. `kind` selects the direction source:
/// uniform-coordinate, diagonal-coordinate, rownorm-coordinate,
/// custom-coordinate, spectral, conjugate, sscd, sscd-largest, iscond, issd.
struct MethodSpec {
  std::string kind = "sscd";
  std::size_t k = 0;
  std::size_t tau = 1;
  /// Defaults to 1 for tau = 1 and to the optimal 1/ξ(τ) otherwise.
  std::optional<double> omega;
  double alpha = 1.0;
  /// Empty means the optimal betas (sscd) or all-zero betas (sscd-largest).
  std::optional<std::vector<double>> betas;
  std::vector<double> p;
  double eps = 0.0;
  double perturbation = 1e-3;
  /// Overrides the method name used in file names and legends.
  std::string name;

  std::string display_name() const { return name.empty() ? kind : name; }
};

inline const std::vector<std::string>& method_kinds() {
  static const std::vector<std::string> kinds = {
      "uniform-coordinate", "diagonal-coordinate", "rownorm-coordinate", "custom-coordinate",
      "spectral",           "conjugate",           "sscd",               "sscd-largest",
      "iscond",             "issd"};
  return kinds;
}

/// A method bound to one problem, validated and ready to run trials.
class PreparedMethod {
 public:
  PreparedMethod(const QuadraticProblem& problem, const SpectralDecomposition& decomp,
                 const MethodSpec& spec, Rng& setup_rng)
      : problem_(&problem), spec_(spec) {
    const SymmetricMatrix& a = problem.A();
    const std::size_t n = a.n();
    const std::string& kind = spec.kind;
    if (kind == "iscond" || kind == "conjugate") {
      system_ = std::make_unique<ConjugateSystem>(
          kind == "conjugate" ? a_gram_schmidt(a, sample_random_orthogonal(n, setup_rng))
                              : approx_conjugate_system(a, spec.eps, setup_rng));
    }
    if (kind == "issd") {
      pairs_ = perturbed_eigenpairs(a, decomp, spec.perturbation, setup_rng);
      return;
    }
    if (kind == "iscond") return;

    if (kind == "uniform-coordinate") {
      dist_ = std::make_unique<DirectionDistribution>(coordinate_distribution(a, uniform_probabilities(n), kind));
    } else if (kind == "diagonal-coordinate") {
      dist_ = std::make_unique<DirectionDistribution>(coordinate_distribution(a, diagonal_probabilities(a), kind));
    } else if (kind == "rownorm-coordinate") {
      dist_ = std::make_unique<DirectionDistribution>(coordinate_distribution(a, rownorm_probabilities(a), kind));
    } else if (kind == "custom-coordinate") {
      dist_ = std::make_unique<DirectionDistribution>(coordinate_distribution(a, spec.p, kind));
    } else if (kind == "spectral") {
      dist_ = std::make_unique<DirectionDistribution>(uniform_spectral_distribution(decomp));
    } else if (kind == "conjugate") {
      dist_ = std::make_unique<DirectionDistribution>(conjugate_distribution(*system_));
    } else if (kind == "sscd") {
      const SscdParams params = spec.betas ? make_sscd_params(a.trace(), spec.alpha, *spec.betas)
                                           : sscd_optimal_params(decomp.eigenvalues, spec.k);
      dist_ = std::make_unique<DirectionDistribution>(sscd_distribution(a, decomp, params));
    } else if (kind == "sscd-largest") {
      const std::vector<double> betas = spec.betas ? *spec.betas : std::vector<double>(n - std::min(n, spec.k), 0.0);
      dist_ = std::make_unique<DirectionDistribution>(largest_eig_distribution(a, decomp, spec.k, spec.alpha, betas));
    } else {
      throw ConfigError("unknown method kind '" + kind + "'");
    }

    config_.tau = spec.tau;
    if (spec.omega) {
      config_.omega = *spec.omega;
    } else if (spec.tau > 1) {
      config_.omega = 1.0 / minibatch_xi(extreme_eigenvalues(w_matrix(a, *dist_)).max, spec.tau);
    }
    detail::validate_sd_config(problem, *dist_, config_);
    prepared_ = std::make_unique<detail::PreparedDirections>(a, dist_->directions());
  }

  ConvergenceTrace run(Rng& rng, std::size_t iterations, std::optional<Vector> x0 = {}) const {
    SolverConfig cfg = config_;
    cfg.iterations = iterations;
    cfg.x0 = std::move(x0);
    if (spec_.kind == "iscond") return run_iscond(*problem_, *system_, cfg, rng);
    if (spec_.kind == "issd") return run_issd(*problem_, pairs_, cfg, rng);
    return detail::run_sd_unchecked(*problem_, *dist_, *prepared_, cfg, rng);
  }

  const MethodSpec& spec() const { return spec_; }
  double omega() const { return config_.omega; }
  const DirectionDistribution* distribution() const { return dist_.get(); }
  const ConjugateSystem* system() const { return system_.get(); }
  const std::vector<InexactEigenpair>& pairs() const { return pairs_; }

 private:
  const QuadraticProblem* problem_;
  MethodSpec spec_;
  SolverConfig config_;
  std::unique_ptr<DirectionDistribution> dist_;
  std::unique_ptr<ConjugateSystem> system_;
  std::unique_ptr<detail::PreparedDirections> prepared_;
  std::vector<InexactEigenpair> pairs_;
};

/// Setup stream for method-specific randomness (conjugate systems, inexact
/// eigenvectors); independent of the trial streams.
inline Rng method_setup_rng(std::uint64_t master_seed, std::size_t method_index) {
  return Rng::derive(master_seed ^ 0x9e3779b97f4a7c15ULL, method_index);
}

/// Monte Carlo traces for several methods on one problem. Every method is
/// validated before any trial runs; trial t of every method uses the same
/// stream Rng::derive(master_seed, t).
inline std::vector<MeanTrace> monte_carlo(const QuadraticProblem& problem,
                                          const SpectralDecomposition& decomp,
                                          const std::vector<MethodSpec>& methods,
                                          std::size_t trials, std::size_t iterations,
                                          std::uint64_t master_seed, unsigned workers = 0) {
  if (trials < 1) throw ConfigError("monte_carlo: trials must be >= 1");
  std::vector<std::unique_ptr<PreparedMethod>> prepared;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    Rng setup = method_setup_rng(master_seed, i);
    prepared.push_back(std::make_unique<PreparedMethod>(problem, decomp, methods[i], setup));
  }
  std::vector<MeanTrace> out;
  for (const auto& m : prepared) {
    MeanTrace tr = monte_carlo_trace(
        trials, master_seed, iterations, [&](Rng& rng) { return m->run(rng, iterations); }, workers);
    tr.method = m->spec().display_name();
    tr.k = m->spec().k;
    tr.tau = m->spec().tau;
    out.push_back(std::move(tr));
  }
  return out;
}

/// Full description of a Monte Carlo experiment on a recipe-generated problem.
struct ExperimentSpec {
  std::string matrix_recipe = "uniform:1,60,30";
  std::uint64_t matrix_seed = 1;
  std::vector<MethodSpec> methods;
  std::size_t trials = 2000;
  std::size_t iterations = 600;
  std::uint64_t master_seed = 42;
  std::string output_prefix = "experiment";
};

/// A and b ~ N(0, I) drawn from the recipe's seed.
inline QuadraticProblem problem_from_recipe(const std::string& recipe, std::uint64_t seed) {
  Rng rng(seed);
  SymmetricMatrix a = matrix_from_recipe(recipe, rng);
  Vector b = random_normal_vector(a.n(), rng);
  return QuadraticProblem(std::move(a), std::move(b));
}

inline std::vector<MeanTrace> monte_carlo(const ExperimentSpec& spec, unsigned workers = 0) {
  if (spec.trials < 1) throw ConfigError("experiment: trials must be >= 1");
  const QuadraticProblem problem = problem_from_recipe(spec.matrix_recipe, spec.matrix_seed);
  const SpectralDecomposition decomp = jacobi_eigendecompose(problem.A());
  return monte_carlo(problem, decomp, spec.methods, spec.trials, spec.iterations, spec.master_seed,
                     workers);
}

/// First iteration whose mean relative error is <= target, if any.
inline std::optional<std::size_t> iterations_to_reach(const MeanTrace& tr, double target) {
  for (std::size_t t = 0; t < tr.mean.size(); ++t)
    if (tr.mean[t] <= target) return t;
  return std::nullopt;
}

/// Theoretical iteration count log(target)/log(1 − rate).
inline double theoretical_iterations(double rate, double target) {
  return std::log(target) / std::log1p(-rate);
}

}  // namespace rsd
