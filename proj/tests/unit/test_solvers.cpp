#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace rsd;

namespace {

QuadraticProblem random_problem(std::size_t n, std::uint64_t seed, double lo = 1, double hi = 10) {
  Rng rng(seed);
  SymmetricMatrix a = random_spd(n, rng, lo, hi);
  Vector b = random_normal_vector(n, rng);
  return QuadraticProblem(std::move(a), std::move(b));
}

}  // namespace

TEST(QuadraticProblem, SolutionAndObjective) {
  const QuadraticProblem p = random_problem(6, 1);
  EXPECT_LT(max_abs(p.residual_at_solution()), 1e-12);
  EXPECT_NEAR(p.error(p.x_star()), 0.0, 1e-24);
  // ½‖x − x_*‖²_A = f(x) − f(x_*).
  Vector x(6, 0.3);
  EXPECT_NEAR(0.5 * p.error(x), p.objective(x) - p.objective(p.x_star()), 1e-12);
  EXPECT_THROW(QuadraticProblem(SymmetricMatrix::identity(2), Vector{1, 2, 3}), DimensionError);
}

TEST(SdStep, ProjectsOntoHyperplane) {
  const QuadraticProblem p = random_problem(5, 2);
  const Vector x(5, 1.0);
  const Vector s{0.3, -1, 0.2, 0, 0.5};
  const Vector y = sd_step(p, x, s, 1.0);
  // With ω = 1 the new residual is orthogonal to s.
  EXPECT_NEAR(dot(s, subtract(p.A() * y, p.b())), 0.0, 1e-12);
  EXPECT_THROW(sd_step(p, x, Vector(5, 0.0), 1.0), DegenerateDirectionError);
}

TEST(SsdStep, RemovesOneEigencomponent) {
  const QuadraticProblem p = random_problem(4, 3);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const Vector x(4, 2.0);
  const Vector y = ssd_step(x, d.eigenvector(1), d.eigenvalues[1], p.b());
  EXPECT_NEAR(dot(d.eigenvector(1), subtract(y, p.x_star())), 0.0, 1e-12);
  const Vector z = sd_step(p, x, d.eigenvector(1), 1.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y[i], z[i], 1e-12);
}

TEST(RunSd, MatchesNaiveImplementation) {
  const QuadraticProblem p = random_problem(8, 4);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const std::vector<DirectionDistribution> dists = {
      coordinate_distribution(p.A(), diagonal_probabilities(p.A())),
      uniform_spectral_distribution(d),
      sscd_distribution(p.A(), d, sscd_optimal_params(d.eigenvalues, 3))};
  for (const auto& dist : dists) {
    for (double omega : {1.0, 0.6, 1.7}) {
      SolverConfig cfg;
      cfg.iterations = 150;
      cfg.omega = omega;
      Rng r1(99), r2(99);
      const ConvergenceTrace tr = run_sd(p, dist, cfg, r1);
      const std::vector<double> ref = oracle::naive_sd(p, dist, omega, 150, r2);
      ASSERT_EQ(tr.errors.size(), ref.size());
      for (std::size_t t = 0; t < ref.size(); ++t)
        EXPECT_NEAR(tr.errors[t], ref[t], 1e-10 * std::max(1e-6, ref[t]) + 1e-15) << dist.label() << " t=" << t;
    }
  }
}

TEST(RunSd, DefaultStartHasUnitError) {
  const QuadraticProblem p = random_problem(5, 5);
  SolverConfig cfg;
  cfg.iterations = 0;
  cfg.seed = 3;
  const ConvergenceTrace tr = run_sd(p, coordinate_distribution(p.A(), uniform_probabilities(5)), cfg);
  ASSERT_EQ(tr.errors.size(), 1u);
  EXPECT_NEAR(tr.errors[0], 1.0, 1e-12);
}

TEST(RunSd, ErrorsNeverIncreaseForUnitStepsize) {
  const QuadraticProblem p = random_problem(10, 6, 1, 1000);
  SolverConfig cfg;
  cfg.iterations = 500;
  cfg.seed = 8;
  const ConvergenceTrace tr = run_sd(p, coordinate_distribution(p.A(), uniform_probabilities(10)), cfg);
  for (std::size_t t = 1; t < tr.errors.size(); ++t) EXPECT_LE(tr.errors[t], tr.errors[t - 1] * (1 + 1e-9) + 1e-30);
}

TEST(RunSd, ExplicitStartAndSeedReproducibility) {
  const QuadraticProblem p = random_problem(4, 7);
  SolverConfig cfg;
  cfg.iterations = 20;
  cfg.seed = 11;
  cfg.x0 = Vector(4, 0.0);
  const auto dist = coordinate_distribution(p.A(), uniform_probabilities(4));
  const ConvergenceTrace a = run_sd(p, dist, cfg), b = run_sd(p, dist, cfg);
  EXPECT_EQ(a.errors, b.errors);
  EXPECT_EQ(a.x0, Vector(4, 0.0));
  EXPECT_NEAR(a.errors[0], p.error(Vector(4, 0.0)), 1e-12);
  cfg.x0 = Vector(3, 0.0);
  EXPECT_THROW(run_sd(p, dist, cfg), DimensionError);
}

TEST(RunSd, ConfigValidation) {
  const QuadraticProblem p = random_problem(3, 8);
  const auto dist = coordinate_distribution(p.A(), uniform_probabilities(3));
  SolverConfig cfg;
  cfg.iterations = 5;
  for (double bad : {0.0, 2.0, -1.0, 2.5}) {
    cfg.omega = bad;
    EXPECT_THROW(run_sd(p, dist, cfg), ConfigError) << bad;
  }
  cfg.omega = 1.0;
  const DirectionDistribution partial({{1, 0, 0}, {0, 1, 0}}, {0.5, 0.5}, "partial");
  EXPECT_THROW(run_sd(p, partial, cfg), ConfigError);
  cfg.tau = 0;
  EXPECT_THROW(run_minibatch_sd(p, dist, cfg), ConfigError);
}

TEST(Minibatch, TauOneReproducesRunSd) {
  const QuadraticProblem p = random_problem(9, 9);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const auto dist = sscd_distribution(p.A(), d, sscd_optimal_params(d.eigenvalues, 4));
  SolverConfig cfg;
  cfg.iterations = 200;
  cfg.seed = 1234;
  EXPECT_EQ(run_sd(p, dist, cfg).errors, run_minibatch_sd(p, dist, cfg).errors);
}

TEST(Minibatch, StepsizeRangeUsesXi) {
  const QuadraticProblem p = random_problem(6, 10);
  const auto dist = coordinate_distribution(p.A(), uniform_probabilities(6));
  const double lmax = extreme_eigenvalues(w_matrix(p.A(), dist)).max;
  SolverConfig cfg;
  cfg.iterations = 10;
  cfg.tau = 4;
  const double xi = minibatch_xi(lmax, 4);
  cfg.omega = 2.0 / xi * 1.01;
  EXPECT_THROW(run_minibatch_sd(p, dist, cfg), ConfigError);
  cfg.omega = 2.0 / xi * 0.99;
  EXPECT_NO_THROW(run_minibatch_sd(p, dist, cfg));
}

TEST(Minibatch, FullSpectralBatchAveragesSteps) {
  // With τ draws of eigenvectors the averaged update is an explicit formula;
  // check one step against dense evaluation.
  const QuadraticProblem p = random_problem(5, 11);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const auto dist = uniform_spectral_distribution(d);
  SolverConfig cfg;
  cfg.iterations = 1;
  cfg.tau = 3;
  cfg.omega = 1.2;
  cfg.x0 = Vector(5, 1.0);
  Rng r1(5), r2(5);
  const ConvergenceTrace tr = run_minibatch_sd(p, dist, cfg, r1);
  Vector x = *cfg.x0, acc(5, 0.0);
  for (int i = 0; i < 3; ++i) {
    const Vector y = sd_step(p, x, dist.sample(r2), 1.2);
    for (std::size_t j = 0; j < 5; ++j) acc[j] += (y[j] - x[j]) / 3.0;
  }
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(tr.final_iterate[j], x[j] + acc[j], 1e-12);
}

TEST(Iscond, ExactSystemDirectSolveAndRate) {
  const QuadraticProblem p = random_problem(7, 12);
  Rng rng(3);
  const ConjugateSystem s = a_gram_schmidt(p.A(), sample_random_orthogonal(7, rng));
  const Vector x = direct_conjugate_solve(s, p.b());
  EXPECT_LT(std::sqrt(p.error(x)), 1e-10);
  SolverConfig cfg;
  cfg.iterations = 400;
  cfg.seed = 2;
  const ConvergenceTrace tr = run_iscond(p, s, cfg);
  EXPECT_LT(tr.errors.back(), 1e-20);
}

TEST(Issd, ExactPairsConvergeAndInexactPlateau) {
  const QuadraticProblem p = random_problem(6, 13);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  std::vector<InexactEigenpair> exact;
  for (std::size_t i = 0; i < 6; ++i) exact.push_back({d.eigenvector(i), d.eigenvalues[i]});
  SolverConfig cfg;
  cfg.iterations = 400;
  cfg.seed = 4;
  EXPECT_LT(run_issd(p, exact, cfg).errors.back(), 1e-20);

  Rng rng(6);
  const auto pairs = perturbed_eigenpairs(p.A(), d, 1e-2, rng);
  const ConvergenceTrace tr = run_issd(p, pairs, cfg);
  EXPECT_GT(tr.errors.back(), 1e-12);
  EXPECT_LT(tr.errors.back(), 1e-1);
  auto bad = pairs;
  bad[0].lambda = -1;
  EXPECT_THROW(run_issd(p, bad, cfg), DomainError);
  bad = pairs;
  bad[0].w[0] += 0.1;
  EXPECT_THROW(run_issd(p, bad, cfg), ValidationError);
}

TEST(InexactEigenvalue, OptimalEstimateIsOrthogonalToResidual) {
  const QuadraticProblem p = random_problem(5, 14);
  Rng rng(1);
  Vector w = random_normal_vector(5, rng);
  const double nrm = norm2(w);
  for (double& v : w) v /= nrm;
  const double lambda = optimal_inexact_eigenvalue(p.A(), w);
  EXPECT_NEAR(dot(w, inexact_residual(p.A(), w, lambda)), 0.0, 1e-13);
  // Minimizes ‖Aw − λw‖ over λ.
  const double best = norm2(inexact_residual(p.A(), w, lambda));
  EXPECT_LT(best, norm2(inexact_residual(p.A(), w, lambda + 1e-3)));
  EXPECT_LT(best, norm2(inexact_residual(p.A(), w, lambda - 1e-3)));
  EXPECT_THROW(optimal_inexact_eigenvalue(p.A(), Vector(5, 1.0)), ValidationError);
}

TEST(Engine, CoordinateFastPathMatchesDenseDirections) {
  // Coordinates given as scaled vectors skip the fast path; 2·e_i yields the
  // same iterates as e_i.
  const QuadraticProblem p = random_problem(6, 15);
  std::vector<Vector> dirs;
  for (std::size_t i = 0; i < 6; ++i) dirs.push_back(scaled(unit_vector(6, i), 2.0));
  const DirectionDistribution dense(dirs, uniform_probabilities(6), "scaled");
  const auto fast = coordinate_distribution(p.A(), uniform_probabilities(6));
  SolverConfig cfg;
  cfg.iterations = 100;
  cfg.seed = 21;
  const auto a = run_sd(p, dense, cfg).errors, b = run_sd(p, fast, cfg).errors;
  for (std::size_t t = 0; t < a.size(); ++t) EXPECT_NEAR(a[t], b[t], 1e-12 * std::max(b[t], 1e-12));
}
