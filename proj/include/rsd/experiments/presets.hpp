#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/experiments/csv.hpp"
#include "rsd/experiments/monte_carlo.hpp"
#include "rsd/experiments/spectra.hpp"
#include "rsd/plot/svg_chart.hpp"

namespace rsd {

struct ExperimentPanel {
  std::string title;
  std::vector<MeanTrace> traces;
};

struct ExperimentResult {
  std::string name;
  std::string title;
  std::uint64_t seed = 0;
  std::vector<ExperimentPanel> panels;

  std::vector<MeanTrace> all_traces() const {
    std::vector<MeanTrace> out;
    for (const auto& p : panels) out.insert(out.end(), p.traces.begin(), p.traces.end());
    return out;
  }
};

/// Overrides shared by every preset; empty fields keep the preset default.
struct PresetArgs {
  std::optional<std::size_t> trials;
  std::optional<std::size_t> iterations;
  std::uint64_t seed = 42;
  unsigned workers = 0;
};

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

namespace detail {

inline MethodSpec sscd_method(std::size_t k, std::size_t tau = 1, std::string name = "sscd") {
  MethodSpec m;
  m.kind = "sscd";
  m.k = k;
  m.tau = tau;
  m.name = std::move(name);
  return m;
}

inline ExperimentPanel run_panel(std::string title, const std::string& recipe, std::uint64_t seed,
                                 const std::vector<MethodSpec>& methods, std::size_t trials,
                                 std::size_t iterations, unsigned workers) {
  ExperimentSpec spec;
  spec.matrix_recipe = recipe;
  spec.matrix_seed = seed;
  spec.methods = methods;
  spec.trials = trials;
  spec.iterations = iterations;
  spec.master_seed = seed;
  return {std::move(title), monte_carlo(spec, workers)};
}

inline std::string two_cluster_recipe(double theta, double delta) {
  return "clustered:5," + short_number(5 + delta) + ",15;" + short_number(theta) + "," +
         short_number(theta + delta) + ",15";
}

}  // namespace detail

/// n = 30 with 15 eigenvalues in [5, 5+Δ] and 15 in [θ, θ+Δ]; SSCD for each k.
inline ExperimentResult preset_phase_transition(double theta, double delta,
                                                const std::vector<std::size_t>& ks,
                                                std::size_t trials, std::uint64_t seed,
                                                std::size_t iterations = 4000, unsigned workers = 0) {
  if (!(theta > 0.0) || !(delta >= 0.0)) throw ConfigError("phase-transition: theta > 0 and delta >= 0 required");
  std::vector<MethodSpec> methods;
  for (std::size_t k : ks) methods.push_back(detail::sscd_method(k));
  ExperimentResult r{"phase-transition", "two clusters, theta=" + short_number(theta) + ", delta=" + short_number(delta), seed, {}};
  r.panels.push_back(detail::run_panel("", detail::two_cluster_recipe(theta, delta), seed, methods,
                                       trials, iterations, workers));
  return r;
}

/// n = 30 with 10 eigenvalues in each of [10, 10+Δ], [θ, θ+Δ], [2θ, 2θ+Δ].
inline ExperimentResult preset_three_clusters(double theta, double delta,
                                              const std::vector<std::size_t>& ks, std::size_t trials,
                                              std::uint64_t seed, std::size_t iterations = 2000,
                                              unsigned workers = 0) {
  if (!(theta > 0.0) || !(delta >= 0.0)) throw ConfigError("three-clusters: theta > 0 and delta >= 0 required");
  const std::string recipe = "clustered:10," + short_number(10 + delta) + ",10;" + short_number(theta) +
                             "," + short_number(theta + delta) + ",10;" + short_number(2 * theta) + "," +
                             short_number(2 * theta + delta) + ",10";
  std::vector<MethodSpec> methods;
  for (std::size_t k : ks) methods.push_back(detail::sscd_method(k));
  ExperimentResult r{"three-clusters", "three clusters, theta=" + short_number(theta) + ", delta=" + short_number(delta), seed, {}};
  r.panels.push_back(detail::run_panel("", recipe, seed, methods, trials, iterations, workers));
  return r;
}

/// Mini-batch SSCD on the spectrum 1..60 (n = 30) with ω = 1/ξ(τ); one panel per τ.
inline ExperimentResult preset_minibatch(const std::vector<std::size_t>& taus,
                                         const std::vector<std::size_t>& ks, std::size_t trials,
                                         std::uint64_t seed, std::size_t iterations = 600,
                                         unsigned workers = 0) {
  ExperimentResult r{"minibatch", "mini-batch SSCD, spectrum uniform on [1, 60]", seed, {}};
  for (std::size_t tau : taus) {
    if (tau < 1) throw ConfigError("minibatch: tau must be >= 1");
    std::vector<MethodSpec> methods;
    for (std::size_t k : ks) methods.push_back(detail::sscd_method(k, tau, "msscd"));
    r.panels.push_back(detail::run_panel("tau=" + std::to_string(tau), "uniform:1,60,30", seed, methods,
                                         trials, iterations, workers));
  }
  return r;
}

/// Eigenvalues 2^0..2^9, SSCD for k = 0..9.
inline ExperimentResult preset_expdecay(std::size_t trials, std::uint64_t seed,
                                        std::size_t iterations = 3000, unsigned workers = 0) {
  std::vector<MethodSpec> methods;
  for (std::size_t k = 0; k < 10; ++k) methods.push_back(detail::sscd_method(k));
  ExperimentResult r{"expdecay", "eigenvalues 2^0 .. 2^9", seed, {}};
  r.panels.push_back(detail::run_panel("", "expdecay:0.5,10", seed, methods, trials, iterations, workers));
  return r;
}

/// iSconD with ε-approximate conjugate systems on an n×n problem with spectrum in [1, 10].
inline ExperimentResult preset_inexact(const std::vector<double>& eps_list, std::size_t trials,
                                       std::uint64_t seed, std::size_t iterations = 300,
                                       std::size_t n = 10, unsigned workers = 0) {
  if (n < 2) throw ConfigError("inexact: n must be >= 2");
  std::vector<MethodSpec> methods;
  for (double eps : eps_list) {
    if (!(eps >= 0.0 && eps * static_cast<double>(n - 1) < 1.0)) {
      throw ConfigError("inexact: eps must satisfy 0 <= eps < 1/(n-1), got " + short_number(eps));
    }
    MethodSpec m;
    m.kind = "iscond";
    m.eps = eps;
    m.name = "iscond-eps" + short_number(eps);
    methods.push_back(m);
  }
  ExperimentResult r{"inexact", "iSconD, n=" + std::to_string(n), seed, {}};
  r.panels.push_back(detail::run_panel("", "uniform:1,10," + std::to_string(n), seed, methods, trials,
                                       iterations, workers));
  return r;
}

/// n = 200: spectrum uniform on [1, 100] with k ∈ {0, n/10}, and l eigenvalues
/// in [1, 2] with the rest in [100, 200] for k ∈ {0, l}.
inline ExperimentResult preset_large_scale(std::size_t trials, std::uint64_t seed,
                                           std::size_t iterations = 4000,
                                           const std::vector<std::size_t>& ls = {2, 20},
                                           unsigned workers = 0) {
  constexpr std::size_t n = 200;
  ExperimentResult r{"large-scale", "n=200", seed, {}};
  r.panels.push_back(detail::run_panel(
      "uniform on [1, 100]", "uniform:1,100,200", seed,
      {detail::sscd_method(0, 1, "uniform-sscd"), detail::sscd_method(n / 10, 1, "uniform-sscd")}, trials,
      iterations, workers));
  for (std::size_t l : ls) {
    if (l < 1 || l >= n) throw ConfigError("large-scale: l must lie in [1, n-1]");
    const std::string name = "clusters" + std::to_string(l) + "-sscd";
    const std::string recipe = "clustered:1,2," + std::to_string(l) + ";100,200," + std::to_string(n - l);
    r.panels.push_back(detail::run_panel("l=" + std::to_string(l) + " in [1, 2], rest in [100, 200]", recipe,
                                         seed, {detail::sscd_method(0, 1, name), detail::sscd_method(l, 1, name)},
                                         trials, iterations, workers));
  }
  return r;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"phase-transition", "three-clusters", "minibatch",
                                                 "expdecay", "inexact", "large-scale"};
  return names;
}

inline std::string joined_preset_names() {
  std::string s;
  for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

/// Runs a preset with its default parameters and the given overrides.
inline ExperimentResult run_preset(const std::string& name, const PresetArgs& args) {
  const std::size_t trials = args.trials.value_or(2000);
  const auto it = [&](std::size_t def) { return args.iterations.value_or(def); };
  if (name == "phase-transition")
    return preset_phase_transition(100, 1, {0, 6, 12, 18, 24, 29}, trials, args.seed, it(4000), args.workers);
  if (name == "three-clusters")
    return preset_three_clusters(100, 1, {0, 5, 10, 15, 20, 25, 29}, trials, args.seed, it(2000), args.workers);
  if (name == "minibatch")
    return preset_minibatch({1, 2, 4, 8}, {0, 6, 12, 18, 24, 29}, trials, args.seed, it(600), args.workers);
  if (name == "expdecay") return preset_expdecay(trials, args.seed, it(3000), args.workers);
  if (name == "inexact")
    return preset_inexact({0.0, 0.01, 1.0 / 27.0, 0.1}, trials, args.seed, it(300), 10, args.workers);
  if (name == "large-scale")
    return preset_large_scale(args.trials.value_or(200), args.seed, it(4000), {2, 20}, args.workers);
  throw ConfigError("unknown preset '" + name + "'; available presets: " + joined_preset_names());
}

inline std::string series_label(const MeanTrace& tr) {
  std::string s = tr.method + " k=" + std::to_string(tr.k);
  if (tr.tau != 1) s += " tau=" + std::to_string(tr.tau);
  return s;
}

inline std::string experiment_svg(const ExperimentResult& r) {
  std::vector<plot::Panel> panels;
  for (const auto& p : r.panels) {
    plot::Panel panel{p.title, {}};
    for (const auto& tr : p.traces) panel.series.push_back({series_label(tr), tr.mean});
    panels.push_back(std::move(panel));
  }
  plot::ChartOptions opt;
  opt.title = r.title;
  return plot::render_svg(panels, opt);
}

/// CSV per trace plus "<name>.svg", all in dir. Returns every written path.
inline std::vector<std::filesystem::path> write_experiment(const ExperimentResult& r,
                                                           const std::filesystem::path& dir) {
  auto paths = write_trace_csvs(dir, r.name, r.all_traces());
  paths.push_back(dir / (r.name + ".svg"));
  write_text_file(paths.back(), experiment_svg(r));
  return paths;
}

}  // namespace rsd
