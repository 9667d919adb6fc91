#include <gtest/gtest.h>

#include "rsd/experiments/config.hpp"
#include "support/oracles.hpp"

using namespace rsd;

namespace {

QuadraticProblem problem(const std::string& recipe, std::uint64_t seed) { return problem_from_recipe(recipe, seed); }

MethodSpec method(const std::string& kind, std::size_t k = 0, std::size_t tau = 1) {
  MethodSpec m;
  m.kind = kind;
  m.k = k;
  m.tau = tau;
  return m;
}

}  // namespace

TEST(Spectra, Clustered) {
  Rng rng(1);
  const auto point = spectrum_clustered({{5, 5, 15}, {100, 100, 15}}, rng);
  EXPECT_EQ(point.size(), 30u);
  EXPECT_EQ(std::count(point.begin(), point.end(), 5.0), 15);
  EXPECT_EQ(std::count(point.begin(), point.end(), 100.0), 15);
  const auto s = spectrum_clustered({{100, 101, 15}, {5, 6, 15}}, rng);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_GE(s.front(), 5.0);
  EXPECT_LE(s[14], 6.0);
  EXPECT_GE(s[15], 100.0);
  EXPECT_THROW(spectrum_clustered({{0, 1, 3}}, rng), Error);
}

TEST(Spectra, ExpDecayAndUniform) {
  const auto e = spectrum_exp_decay(0.5, 10);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(e[i], std::ldexp(1.0, static_cast<int>(i)));
  EXPECT_EQ(spectrum_exp_decay(0.3, 1), (std::vector<double>{1.0}));
  const auto near = spectrum_exp_decay(0.999, 5);
  EXPECT_LT(near.back() / near.front(), 1.005);
  EXPECT_THROW(spectrum_exp_decay(1.0, 3), Error);
  EXPECT_THROW(spectrum_exp_decay(0.0, 3), Error);
  const auto u = spectrum_uniform(1, 60, 30);
  EXPECT_DOUBLE_EQ(u.front(), 1.0);
  EXPECT_DOUBLE_EQ(u.back(), 60.0);
  EXPECT_NEAR(u[1] - u[0], 59.0 / 29.0, 1e-13);
  EXPECT_EQ(spectrum_uniform(1, 1, 5), std::vector<double>(5, 1.0));
  EXPECT_EQ(spectrum_uniform(3, 3, 1), std::vector<double>{3.0});
  EXPECT_THROW(spectrum_uniform(0, 1, 3), Error);
}

TEST(Spectra, Recipes) {
  Rng rng(2);
  EXPECT_EQ(spectrum_from_recipe("expdecay:0.5,10", rng), spectrum_exp_decay(0.5, 10));
  EXPECT_EQ(spectrum_from_recipe("uniform:1,60,30", rng), spectrum_uniform(1, 60, 30));
  EXPECT_EQ(spectrum_from_recipe("clustered:5,6,15;100,101,15", rng).size(), 30u);
  for (const char* bad : {"clustered:5,6", "uniform:1,2", "ring:1,2,3", "uniform:a,b,c", "expdecay:0.5,2.5"}) {
    try {
      spectrum_from_recipe(bad, rng);
      ADD_FAILURE() << bad;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("recipe"), std::string::npos) << bad;
    }
  }
  Rng r1(3), r2(3);
  EXPECT_EQ(matrix_from_recipe("uniform:1,5,6", r1).matrix(), matrix_from_recipe("uniform:1,5,6", r2).matrix());
  EXPECT_NEAR(eigenvalues(matrix_from_recipe("uniform:1,5,5", r1)).back(), 5.0, 1e-12);
}

TEST(RandomProbabilities, OnSimplex) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_probabilities(7, rng);
    double s = 0;
    for (double v : p) {
      EXPECT_GT(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(MonteCarlo, SingleTrialEqualsNormalizedTrace) {
  const QuadraticProblem p = problem("uniform:1,10,8", 5);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const auto traces = monte_carlo(p, d, {method("sscd", 3)}, 1, 50, 77);
  ASSERT_EQ(traces.size(), 1u);
  Rng rng = Rng::derive(77, 0);
  SolverConfig cfg;
  cfg.iterations = 50;
  const auto dist = sscd_distribution(p.A(), d, sscd_optimal_params(d.eigenvalues, 3));
  const ConvergenceTrace tr = run_sd(p, dist, cfg, rng);
  for (std::size_t t = 0; t <= 50; ++t) {
    EXPECT_DOUBLE_EQ(traces[0].mean[t], tr.errors[t] / tr.errors[0]);
    EXPECT_EQ(traces[0].stderr_[t], 0.0);
  }
  EXPECT_EQ(traces[0].trials, 1u);
  EXPECT_EQ(traces[0].method, "sscd");
}

TEST(MonteCarlo, MeanStartsAtOneAndIsWorkerIndependent) {
  const QuadraticProblem p = problem("clustered:1,2,4;20,30,6", 6);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const std::vector<MethodSpec> ms{method("uniform-coordinate"), method("sscd", 4, 3), method("spectral")};
  const auto one = monte_carlo(p, d, ms, 50, 40, 9, 1);
  const auto many = monte_carlo(p, d, ms, 50, 40, 9, 3);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    EXPECT_EQ(one[i].mean, many[i].mean);
    EXPECT_EQ(one[i].stderr_, many[i].stderr_);
    EXPECT_NEAR(one[i].mean[0], 1.0, 1e-12);
    for (double se : one[i].stderr_) EXPECT_GE(se, 0.0);
  }
}

TEST(MonteCarlo, BlockedReductionMatchesDirectStatistics) {
  const QuadraticProblem p = problem("uniform:1,10,5", 7);
  const auto dist = coordinate_distribution(p.A(), uniform_probabilities(5));
  SolverConfig cfg;
  cfg.iterations = 15;
  const std::size_t trials = 37;
  const MeanTrace mt = monte_carlo_trace(trials, 3, 15, [&](Rng& rng) { return run_sd(p, dist, cfg, rng); });
  for (std::size_t t = 0; t <= 15; t += 5) {
    std::vector<double> v;
    for (std::size_t i = 0; i < trials; ++i) {
      Rng rng = Rng::derive(3, i);
      const auto tr = run_sd(p, dist, cfg, rng);
      v.push_back(tr.errors[t] / tr.errors[0]);
    }
    double mean = 0;
    for (double x : v) mean += x / trials;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(mt.mean[t], mean, 1e-14);
    EXPECT_NEAR(mt.stderr_[t], std::sqrt(ss / (trials - 1) / trials), 1e-14);
  }
}

TEST(MonteCarlo, SpectralDescentExactContraction) {
  const QuadraticProblem p = problem("uniform:1,60,30", 8);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const auto tr = monte_carlo(p, d, {method("spectral")}, 2000, 60, 2024)[0];
  const std::pair<std::size_t, double> checks[] = {
      {10, oracle::kSsd30Pow10}, {30, oracle::kSsd30Pow30}, {60, oracle::kSsd30Pow60}};
  for (const auto& [t, expected] : checks) EXPECT_LE(std::abs(tr.mean[t] - expected), 4 * tr.stderr_[t]) << t;
}

TEST(MonteCarlo, ContractionWithinStepsizeBand) {
  const QuadraticProblem p = problem("clustered:5,6,15;100,101,15", 10);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  for (std::size_t k : {0, 12, 18}) {
    MethodSpec m = method("sscd", k);
    m.omega = 0.8;
    const auto tr = monte_carlo(p, d, {m}, 1000, 20, 11)[0];
    const auto ext = extreme_eigenvalues(
        w_matrix(p.A(), sscd_distribution(p.A(), d, sscd_optimal_params(d.eigenvalues, k))));
    const RateReport r = rate_report_from_extremes(ext.min, ext.max, 0.8);
    for (std::size_t t = 1; t <= 20; ++t) {
      EXPECT_GE(tr.mean[t], std::pow(r.contraction_lower, t) - 4 * tr.stderr_[t]);
      EXPECT_LE(tr.mean[t], std::pow(r.contraction_upper, t) + 4 * tr.stderr_[t]);
    }
  }
}

TEST(MonteCarlo, StandardErrorShrinksWithTrials) {
  const QuadraticProblem p = problem("uniform:1,20,10", 12);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const auto small = monte_carlo(p, d, {method("uniform-coordinate")}, 1000, 20, 13)[0];
  const auto large = monte_carlo(p, d, {method("uniform-coordinate")}, 4000, 20, 14)[0];
  const double ratio = small.stderr_[20] / large.stderr_[20];
  EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(MonteCarlo, DegenerateStartGivesZeros) {
  const QuadraticProblem p = problem("uniform:1,3,4", 15);
  const auto dist = coordinate_distribution(p.A(), uniform_probabilities(4));
  SolverConfig cfg;
  cfg.iterations = 10;
  cfg.x0 = p.x_star();
  const MeanTrace tr = monte_carlo_trace(5, 1, 10, [&](Rng& rng) { return run_sd(p, dist, cfg, rng); });
  EXPECT_TRUE(tr.degenerate);
  for (double v : tr.mean) EXPECT_EQ(v, 0.0);
}

TEST(MonteCarlo, ValidationHappensBeforeTrials) {
  const QuadraticProblem p = problem("uniform:1,3,4", 16);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  MethodSpec bad = method("custom-coordinate");
  bad.p = {0.5, 0.5, 0.0, 0.0};
  EXPECT_THROW(monte_carlo(p, d, {method("spectral"), bad}, 10, 5, 1), ValidationError);
  MethodSpec omega = method("uniform-coordinate");
  omega.omega = 2.0;
  EXPECT_THROW(monte_carlo(p, d, {omega}, 10, 5, 1), ConfigError);
  EXPECT_THROW(monte_carlo(p, d, {method("nope")}, 10, 5, 1), ConfigError);
  EXPECT_THROW(monte_carlo(p, d, {method("spectral")}, 0, 5, 1), ConfigError);

  std::size_t calls = 0;
  EXPECT_THROW(monte_carlo_trace(0, 1, 5, [&](Rng&) { ++calls; return ConvergenceTrace{}; }), ConfigError);
  EXPECT_EQ(calls, 0u);
}

TEST(MonteCarlo, MinibatchDefaultsToOptimalStepsize) {
  const QuadraticProblem p = problem("uniform:1,60,12", 17);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  Rng setup(1);
  const PreparedMethod m(p, d, method("sscd", 5, 4), setup);
  const double lmax = extreme_eigenvalues(w_matrix(p.A(), *m.distribution())).max;
  EXPECT_DOUBLE_EQ(m.omega(), 1.0 / minibatch_xi(lmax, 4));
  const PreparedMethod single(p, d, method("sscd", 5, 1), setup);
  EXPECT_EQ(single.omega(), 1.0);
}

TEST(MonteCarlo, AllMethodKindsRun) {
  const QuadraticProblem p = problem("uniform:1,10,6", 18);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  std::vector<MethodSpec> ms;
  for (const auto& kind : method_kinds()) {
    MethodSpec m = method(kind, 2);
    if (kind == "custom-coordinate") m.p = {0.1, 0.1, 0.2, 0.2, 0.2, 0.2};
    if (kind == "iscond") m.eps = 0.05;
    ms.push_back(m);
  }
  const auto traces = monte_carlo(p, d, ms, 20, 200, 3);
  ASSERT_EQ(traces.size(), ms.size());
  for (const auto& tr : traces) {
    EXPECT_LT(tr.mean.back(), 0.5) << tr.method;
    EXPECT_EQ(tr.mean.size(), 201u);
  }
}

TEST(Presets, SmallRunsHaveExpectedShape) {
  const auto pt = preset_phase_transition(100, 1, {0, 6, 12, 18, 24, 29}, 4, 1, 30);
  ASSERT_EQ(pt.panels.size(), 1u);
  EXPECT_EQ(pt.panels[0].traces.size(), 6u);
  const auto mb = preset_minibatch({1, 2, 4, 8}, {0, 10}, 3, 1, 20);
  EXPECT_EQ(mb.panels.size(), 4u);
  EXPECT_EQ(mb.panels[2].traces[1].tau, 4u);
  const auto ed = preset_expdecay(3, 1, 20);
  EXPECT_EQ(ed.panels[0].traces.size(), 10u);
  const auto in = preset_inexact({0.0, 1.0 / 27}, 3, 1, 20);
  EXPECT_EQ(in.panels[0].traces.size(), 2u);
  EXPECT_THROW(preset_inexact({0.2}, 3, 1, 20), ConfigError);
  const auto tc = preset_three_clusters(100, 1, {0, 10, 20}, 3, 1, 20);
  EXPECT_EQ(tc.panels[0].traces.size(), 3u);
  EXPECT_THROW(run_preset("bogus", {}), ConfigError);
}

TEST(Presets, MinibatchTauOneMatchesSscd) {
  const auto mb = preset_minibatch({1}, {0, 6}, 20, 5, 30);
  const QuadraticProblem p = problem("uniform:1,60,30", 5);
  const SpectralDecomposition d = jacobi_eigendecompose(p.A());
  const auto ref = monte_carlo(p, d, {method("sscd", 0), method("sscd", 6)}, 20, 30, 5);
  EXPECT_EQ(mb.panels[0].traces[0].mean, ref[0].mean);
  EXPECT_EQ(mb.panels[0].traces[1].mean, ref[1].mean);
}

TEST(Presets, DeltaZeroRateJump) {
  const std::vector<double> ev = [] {
    std::vector<double> v(15, 5.0);
    v.insert(v.end(), 15, 100.0);
    return v;
  }();
  const double jump = sscd_rate(ev, 15).rate / sscd_rate(ev, 14).rate;
  EXPECT_GE(jump, 100.0 / 5.0 * 0.5);
}

TEST(Verify, CheapVerificationsPass) {
  for (const auto* id : {"T2", "T3", "T4", "T5", "T-last-eigs", "L-ineq", "direct-solve"}) {
    const VerifyReport r = run_verification(id, 42);
    EXPECT_TRUE(r.passed) << id;
    EXPECT_GE(r.margin, 0.0) << id;
  }
  EXPECT_THROW(run_verification("T99", 1), ConfigError);
}

TEST(Verify, T4ReportsRateGap) {
  const VerifyReport r = verify_t4(5, 100);
  ASSERT_TRUE(r.passed);
  bool found = false;
  for (const auto& line : r.lines) found = found || line.find("20.8") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Config, ParsesExperimentJson) {
  const auto j = nlohmann::json::parse(R"({
    "matrix_recipe": "uniform:1,10,5", "matrix_seed": 3, "trials": 7, "iterations": 9,
    "master_seed": 11, "output_prefix": "demo",
    "methods": [{"kind": "sscd", "k": 2, "tau": 2, "omega": 0.5},
                {"kind": "custom-coordinate", "p": [0.2, 0.2, 0.2, 0.2, 0.2]},
                {"kind": "sscd", "k": 1, "betas": [1.5], "alpha": 2}]
  })");
  const ExperimentSpec s = experiment_from_json(j);
  EXPECT_EQ(s.trials, 7u);
  EXPECT_EQ(s.methods.size(), 3u);
  EXPECT_EQ(*s.methods[0].omega, 0.5);
  EXPECT_EQ(s.methods[1].p.size(), 5u);
  EXPECT_EQ(*s.methods[2].betas, std::vector<double>{1.5});
  const auto traces = monte_carlo(s);
  EXPECT_EQ(traces.size(), 3u);
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"methods": []})")), ConfigError);
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"bogus": 1, "methods": [{"kind":"sscd"}]})")),
               ConfigError);
  EXPECT_THROW(method_from_json(nlohmann::json::parse(R"({"kind": "unknown"})")), ConfigError);
  EXPECT_THROW(method_from_json(nlohmann::json::parse(R"({"kind": "sscd", "k": "two"})")), ConfigError);
}

TEST(Presets, SingleSampleTracesWithinContractionBand) {
  struct Case {
    ExperimentResult result;
    std::string recipe;
  };
  const std::vector<Case> cases = {
      {preset_phase_transition(100, 1, {0, 12, 18, 29}, 600, 3, 20), detail::two_cluster_recipe(100, 1)},
      {preset_three_clusters(100, 10, {0, 10, 20, 29}, 600, 3, 20), "clustered:10,20,10;100,110,10;200,210,10"},
      {preset_expdecay(600, 3, 20), "expdecay:0.5,10"},
      {preset_minibatch({1}, {0, 6, 29}, 600, 3, 20), "uniform:1,60,30"}};
  for (const auto& c : cases) {
    const QuadraticProblem p = problem(c.recipe, 3);
    const SpectralDecomposition d = jacobi_eigendecompose(p.A());
    for (const auto& tr : c.result.panels[0].traces) {
      const auto ext = extreme_eigenvalues(
          w_matrix(p.A(), sscd_distribution(p.A(), d, sscd_optimal_params(d.eigenvalues, tr.k))));
      const RateReport r = rate_report_from_extremes(ext.min, ext.max, 1.0);
      for (std::size_t t = 1; t <= 20; ++t) {
        EXPECT_GE(tr.mean[t], std::pow(r.contraction_lower, t) - 4 * tr.stderr_[t]) << c.result.name << tr.k;
        EXPECT_LE(tr.mean[t], std::pow(r.contraction_upper, t) + 4 * tr.stderr_[t]) << c.result.name << tr.k;
      }
    }
  }
}

TEST(Presets, FullAugmentationAndExactConjugacyGiveOneOverN) {
  const auto pt = preset_phase_transition(100, 1, {29}, 2000, 8, 60);
  const auto in = preset_inexact({0.0}, 2000, 8, 60);
  const std::pair<const MeanTrace*, double> checks[] = {{&pt.panels[0].traces[0], 30.0},
                                                         {&in.panels[0].traces[0], 10.0}};
  for (const auto& [tr, n] : checks) {
    for (std::size_t t : {10, 30, 60}) {
      const double expected = std::pow(1.0 - 1.0 / n, static_cast<double>(t));
      EXPECT_LE(std::abs(tr->mean[t] - expected), 4 * tr->stderr_[t]) << tr->method << " t=" << t;
    }
  }
}
