// Compares coordinate descent with its spectrally augmented variants on a
// matrix whose 5 smallest eigenvalues are far below the rest.
#include <cstdio>

#include "rsd.hpp"

int main() {
  rsd::Rng rng(2024);
  const rsd::SymmetricMatrix a = rsd::matrix_from_recipe("clustered:1,2,5;50,60,25", rng);
  const rsd::QuadraticProblem problem(a, rsd::random_normal_vector(a.n(), rng));
  const rsd::SpectralDecomposition d = rsd::jacobi_eigendecompose(a);

  std::printf("%4s %14s %14s %12s\n", "k", "rate", "lambda_min(W)", "err@1000");
  for (std::size_t k : {0, 2, 4, 5, 10, 29}) {
    const auto dist = rsd::sscd_distribution(a, d, rsd::sscd_optimal_params(d.eigenvalues, k));
    const double lmin = rsd::extreme_eigenvalues(rsd::w_matrix(a, dist)).min;
    rsd::SolverConfig cfg;
    cfg.iterations = 1000;
    cfg.seed = 7;
    const rsd::ConvergenceTrace tr = rsd::run_sd(problem, dist, cfg);
    std::printf("%4zu %14.6g %14.6g %12.3g\n", k, rsd::sscd_rate(d.eigenvalues, k).rate, lmin,
                tr.errors.back() / tr.errors.front());
  }
}
