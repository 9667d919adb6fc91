#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsd.hpp"
#include "rsd/experiments/config.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 42;
  std::string out = ".";
  std::optional<std::size_t> trials;
  std::optional<std::size_t> iterations;
  std::string config;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--iterations", c.iterations, "iterations per run");
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--workers", c.workers, "worker threads (0 = hardware concurrency)");
}

void echo_seed(std::uint64_t seed) { std::cerr << "seed: " << seed << '\n'; }

bool looks_like_recipe(const std::string& s) {
  for (const char* p : {"clustered:", "uniform:", "expdecay:"})
    if (s.rfind(p, 0) == 0) return true;
  return false;
}

// Matrix from a text file or a recipe string; recipes use their own seeded stream.
rsd::SymmetricMatrix load_matrix(const std::string& source, std::uint64_t matrix_seed) {
  if (looks_like_recipe(source)) {
    rsd::Rng rng(matrix_seed);
    return rsd::matrix_from_recipe(source, rng);
  }
  return rsd::read_matrix_file(source);
}

rsd::Vector load_rhs(const std::string& source, std::size_t n, std::uint64_t matrix_seed) {
  if (source == "zeros") return rsd::Vector(n, 0.0);
  if (source == "ones") return rsd::Vector(n, 1.0);
  if (source == "random") {
    rsd::Rng rng(matrix_seed);
    return rsd::random_normal_vector(n, rng);
  }
  std::ifstream in(source);
  if (!in) throw rsd::ParseError("right-hand side file not found or unreadable: '" + source + "'");
  rsd::Vector b;
  for (double v; in >> v;) b.push_back(v);
  if (!in.eof()) throw rsd::ParseError("right-hand side parse error in '" + source + "'");
  if (b.size() != n) {
    throw rsd::DimensionError("right-hand side has " + std::to_string(b.size()) + " entries, expected " +
                              std::to_string(n));
  }
  return b;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(cell, &used);
      if (used != cell.size() || v < 0) throw std::invalid_argument(cell);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw rsd::ParseError("expected a comma-separated list of nonnegative integers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      throw rsd::ParseError("expected a comma-separated list of numbers, got '" + text + "'");
    }
  }
  return out;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string matrix;
  std::uint64_t matrix_seed = 1;
  std::string rhs = "random";
  rsd::MethodSpec method;
  std::optional<double> omega;
  std::string betas;
  std::string probabilities;
};

double theoretical_contraction(const rsd::QuadraticProblem& problem, const rsd::PreparedMethod& m,
                               std::string& detail) {
  const auto& a = problem.A();
  if (m.spec().kind == "issd") {
    const auto nb = rsd::issd_neighborhood(problem, m.pairs());
    detail = "neighborhood q = " + rsd::format_g17(nb.q) + ", r0/(1-q) = " + rsd::format_g17(nb.limit);
    return std::nan("");
  }
  const rsd::DirectionDistribution dist =
      m.spec().kind == "iscond" ? rsd::conjugate_distribution(*m.system()) : *m.distribution();
  const auto ext = rsd::extreme_eigenvalues(rsd::w_matrix(a, dist));
  if (m.spec().kind == "iscond") {
    detail = "lambda_min(W) = " + rsd::format_g17(ext.min);
    return 1.0 - ext.min;
  }
  if (m.spec().tau == 1) {
    const auto rep = rsd::rate_report_from_extremes(ext.min, ext.max, m.omega());
    detail = "lambda_min(W) = " + rsd::format_g17(ext.min) + ", lambda_max(W) = " + rsd::format_g17(ext.max);
    return rep.contraction_upper;
  }
  const auto mb = rsd::minibatch_rate(ext.min, ext.max, m.omega(), m.spec().tau);
  detail = "xi(tau) = " + rsd::format_g17(mb.xi) + ", omega = " + rsd::format_g17(m.omega());
  return mb.rho;
}

int run_solve(const Common& c, SolveArgs s) {
  if (!c.config.empty()) {
    const auto j = rsd::load_json_file(c.config);
    rsd::detail::read_field(j, "matrix", s.matrix);
    rsd::detail::read_field(j, "matrix_seed", s.matrix_seed);
    rsd::detail::read_field(j, "b", s.rhs);
    if (j.contains("method")) s.method = rsd::method_from_json(j.at("method"));
  }
  if (s.matrix.empty()) throw rsd::ConfigError("solve: --matrix is required (file path or recipe)");
  if (s.omega) s.method.omega = s.omega;
  if (!s.betas.empty()) s.method.betas = parse_real_list(s.betas);
  if (!s.probabilities.empty()) s.method.p = parse_real_list(s.probabilities);
  const std::size_t iterations = c.iterations.value_or(100);
  echo_seed(c.seed);

  // A recipe with a random b matches the problem an experiment builds from the same seed.
  const rsd::QuadraticProblem problem = [&] {
    if (looks_like_recipe(s.matrix) && s.rhs == "random") return rsd::problem_from_recipe(s.matrix, s.matrix_seed);
    rsd::SymmetricMatrix a = load_matrix(s.matrix, s.matrix_seed);
    rsd::Vector b = load_rhs(s.rhs, a.n(), s.matrix_seed);
    return rsd::QuadraticProblem(std::move(a), std::move(b));
  }();
  const rsd::SpectralDecomposition decomp = rsd::jacobi_eigendecompose(problem.A());
  rsd::Rng setup = rsd::method_setup_rng(c.seed, 0);
  const rsd::PreparedMethod method(problem, decomp, s.method, setup);

  const rsd::MeanTrace tr = rsd::monte_carlo_trace(
      1, c.seed, iterations, [&](rsd::Rng& rng) { return method.run(rng, iterations); }, 1);
  rsd::MeanTrace named = tr;
  named.method = s.method.display_name();
  named.k = s.method.k;
  named.tau = s.method.tau;
  const fs::path path = fs::path(c.out) / rsd::trace_filename("solve", named);
  rsd::write_text_file(path, rsd::trace_csv(named));

  std::string detail;
  const double contraction = theoretical_contraction(problem, method, detail);
  const double final_rel = named.mean.back();
  std::cerr << "method: " << named.method << " (k=" << named.k << ", tau=" << named.tau << ", n=" << problem.n()
            << ")\n";
  std::cerr << "final relative error: " << rsd::format_g17(final_rel) << '\n';
  if (iterations > 0 && final_rel > 0) {
    std::cerr << "observed per-step factor: "
              << rsd::format_g17(std::pow(final_rel, 1.0 / static_cast<double>(iterations))) << '\n';
  }
  if (!std::isnan(contraction))
    std::cerr << "theoretical contraction: " << rsd::format_g17(contraction) << '\n';
  std::cerr << detail << '\n';
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

// ---- rates ----------------------------------------------------------------

struct RatesArgs {
  std::string matrix;
  std::uint64_t matrix_seed = 1;
  std::string methods = "uniform-coordinate,diagonal-coordinate,rownorm-coordinate,spectral,sscd";
  std::string ks;
  std::string taus = "1";
  double eps = 0.0;
};

int run_rates(const Common& c, const RatesArgs& r) {
  if (r.matrix.empty()) throw rsd::ConfigError("rates: --matrix is required (file path or recipe)");
  echo_seed(c.seed);
  const rsd::SymmetricMatrix a = load_matrix(r.matrix, r.matrix_seed);
  const std::size_t n = a.n();
  const rsd::SpectralDecomposition decomp = rsd::jacobi_eigendecompose(a);
  const rsd::QuadraticProblem problem(a, rsd::Vector(n, 0.0));
  std::vector<std::size_t> ks;
  if (r.ks.empty()) {
    for (std::size_t k = 0; k < n; ++k) ks.push_back(k);
  } else {
    ks = parse_index_list(r.ks);
  }
  const std::vector<std::size_t> taus = parse_index_list(r.taus);

  std::vector<std::string> kinds;
  std::stringstream ss(r.methods);
  for (std::string k; std::getline(ss, k, ',');) kinds.push_back(k);

  std::ostringstream csv;
  csv << "method,k,tau,lambda_min_W,lambda_max_W,contraction,complexity\n";
  std::size_t setup_index = 0;
  for (const std::string& kind : kinds) {
    if (kind == "issd") throw rsd::ConfigError("rates: issd has no linear rate; use solve or verify iSSD");
    const bool per_k = kind == "sscd" || kind == "sscd-largest";
    for (std::size_t k : per_k ? ks : std::vector<std::size_t>{0}) {
      rsd::MethodSpec spec;
      spec.kind = kind;
      spec.k = k;
      spec.eps = r.eps;
      rsd::Rng setup = rsd::method_setup_rng(c.seed, setup_index++);
      const rsd::PreparedMethod m(problem, decomp, spec, setup);
      const rsd::DirectionDistribution dist =
          kind == "iscond" ? rsd::conjugate_distribution(*m.system()) : *m.distribution();
      const auto ext = rsd::extreme_eigenvalues(rsd::w_matrix(a, dist));
      for (std::size_t tau : taus) {
        const auto mb = rsd::minibatch_rate(ext.min, ext.max, 1.0 / rsd::minibatch_xi(ext.max, tau), tau);
        const double contraction = mb.rho_opt;
        csv << kind << ',' << k << ',' << tau << ',' << rsd::format_g17(ext.min) << ','
            << rsd::format_g17(ext.max) << ',' << rsd::format_g17(contraction) << ','
            << rsd::format_g17(1.0 / (1.0 - contraction)) << '\n';
      }
    }
  }
  const fs::path path = fs::path(c.out) / "rates.csv";
  rsd::write_text_file(path, csv.str());
  std::cerr << "n = " << n << ", wrote " << path.string() << '\n';
  return 0;
}

// ---- experiment -------------------------------------------------------------

int run_experiment(const Common& c, const std::string& preset, bool seed_given) {
  if (preset.empty() == c.config.empty())
    throw rsd::ConfigError("experiment: give exactly one of --preset or --config; presets: " +
                           rsd::joined_preset_names());
  rsd::ExperimentResult result;
  if (!preset.empty()) {
    bool known = false;
    for (const auto& p : rsd::preset_names()) known = known || p == preset;
    if (!known) {
      throw rsd::ConfigError("unknown preset '" + preset + "'; available presets: " + rsd::joined_preset_names());
    }
    echo_seed(c.seed);
    result = rsd::run_preset(preset, {c.trials, c.iterations, c.seed, c.workers});
  } else {
    rsd::ExperimentSpec spec = rsd::experiment_from_json(rsd::load_json_file(c.config));
    if (c.trials) spec.trials = *c.trials;
    if (c.iterations) spec.iterations = *c.iterations;
    if (seed_given) spec.master_seed = c.seed;
    echo_seed(spec.master_seed);
    result.name = spec.output_prefix;
    result.title = spec.matrix_recipe;
    result.seed = spec.master_seed;
    result.panels.push_back({"", rsd::monte_carlo(spec, c.workers)});
  }
  const auto paths = rsd::write_experiment(result, c.out);
  for (const auto& tr : result.all_traces()) {
    std::cerr << rsd::series_label(tr) << ": final mean relative error " << rsd::format_g17(tr.mean.back())
              << (tr.degenerate ? " (degenerate start)" : "") << '\n';
  }
  std::cerr << "wrote " << paths.size() << " files to " << c.out << '\n';
  return 0;
}

// ---- verify -----------------------------------------------------------------

int run_verify(const Common& c, std::vector<std::string> ids) {
  if (ids.size() == 1 && ids[0] == "all") ids = rsd::theorem_ids();
  for (const auto& id : ids) {
    bool known = false;
    for (const auto& t : rsd::theorem_ids()) known = known || t == id;
    if (!known) {
      throw rsd::ConfigError("unknown theorem id '" + id + "'; available ids: " + rsd::joined_theorem_ids() +
                             ", all");
    }
  }
  echo_seed(c.seed);
  bool all_ok = true;
  std::ostringstream csv;
  csv << "id,passed,margin\n";
  for (const auto& id : ids) {
    const rsd::VerifyReport rep = rsd::run_verification(id, c.seed, c.trials, c.workers);
    all_ok = all_ok && rep.passed;
    std::cerr << (rep.passed ? "PASS " : "FAIL ") << rep.id << "  margin " << rsd::format_g17(rep.margin) << '\n';
    for (const auto& line : rep.lines) std::cerr << "    " << line << '\n';
    csv << rep.id << ',' << (rep.passed ? 1 : 0) << ',' << rsd::format_g17(rep.margin) << '\n';
  }
  if (c.out != ".") rsd::write_text_file(fs::path(c.out) / "verify.csv", csv.str());
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized descent methods for quadratic minimization"};
  app.require_subcommand(1);

  Common common;

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "run one solver and write its error trace");
  add_common(solve_cmd, common);
  solve_cmd->add_option("--matrix", solve.matrix, "matrix file or recipe (clustered:..., uniform:..., expdecay:...)");
  solve_cmd->add_option("--matrix-seed", solve.matrix_seed, "seed of the recipe matrix and random b");
  solve_cmd->add_option("--b", solve.rhs, "right-hand side: random, zeros, ones or a file");
  solve_cmd->add_option("--method", solve.method.kind, "method kind")
      ->check(CLI::IsMember(rsd::method_kinds()));
  solve_cmd->add_option("--k", solve.method.k, "number of eigenvectors");
  solve_cmd->add_option("--tau", solve.method.tau, "mini-batch size")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--omega", solve.omega, "stepsize (default 1, or 1/xi for tau > 1)");
  solve_cmd->add_option("--alpha", solve.method.alpha, "coordinate weight");
  solve_cmd->add_option("--betas", solve.betas, "comma-separated eigenvector weights");
  solve_cmd->add_option("--p", solve.probabilities, "comma-separated coordinate probabilities");
  solve_cmd->add_option("--eps", solve.method.eps, "conjugacy tolerance for iscond");
  solve_cmd->add_option("--perturbation", solve.method.perturbation, "eigenvector perturbation for issd");

  RatesArgs rates;
  auto* rates_cmd = app.add_subcommand("rates", "tabulate theoretical rates");
  add_common(rates_cmd, common);
  rates_cmd->add_option("--matrix", rates.matrix, "matrix file or recipe");
  rates_cmd->add_option("--matrix-seed", rates.matrix_seed, "seed of the recipe matrix");
  rates_cmd->add_option("--methods", rates.methods, "comma-separated method kinds");
  rates_cmd->add_option("--ks", rates.ks, "comma-separated k values (default 0..n-1)");
  rates_cmd->add_option("--taus", rates.taus, "comma-separated mini-batch sizes");
  rates_cmd->add_option("--eps", rates.eps, "conjugacy tolerance for iscond");

  std::string preset;
  auto* exp_cmd = app.add_subcommand("experiment", "run a preset or configured Monte Carlo experiment");
  add_common(exp_cmd, common);
  exp_cmd->add_option("--preset", preset, "preset name: " + rsd::joined_preset_names());

  std::vector<std::string> ids;
  auto* verify_cmd = app.add_subcommand("verify", "numerically verify a theorem");
  add_common(verify_cmd, common);
  verify_cmd->add_option("ids", ids, "theorem ids: " + rsd::joined_theorem_ids() + " or all")->required();

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'; available subcommands: solve, rates, experiment, verify\n";
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) return run_solve(common, solve);
    if (*rates_cmd) return run_rates(common, rates);
    if (*exp_cmd) return run_experiment(common, preset, exp_cmd->count("--seed") > 0);
    if (*verify_cmd) return run_verify(common, ids);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
