#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/linalg.hpp"
#include "rsd/rng.hpp"

namespace rsd {

struct Cluster {
  double lo;
  double hi;
  std::size_t count;
};

/// `count` uniform draws from each [lo, hi], concatenated and sorted ascending.
inline std::vector<double> spectrum_clustered(const std::vector<Cluster>& clusters, Rng& rng) {
  std::vector<double> out;
  for (const Cluster& c : clusters) {
    if (!(c.lo > 0.0)) throw ParameterError("spectrum_clustered: cluster bounds must be positive");
    if (!(c.hi >= c.lo)) throw ParameterError("spectrum_clustered: cluster needs lo <= hi");
    for (std::size_t i = 0; i < c.count; ++i) out.push_back(c.lo == c.hi ? c.lo : rng.uniform(c.lo, c.hi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Geometric spectrum 1, 1/α, …, 1/α^{n−1} (smallest eigenvalue 1).
inline std::vector<double> spectrum_exp_decay(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("spectrum_exp_decay: alpha must lie in (0, 1)");
  if (n < 1) throw ParameterError("spectrum_exp_decay: n must be >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(alpha, -static_cast<double>(i));
  return out;
}

/// Arithmetic grid lo … hi with n points.
inline std::vector<double> spectrum_uniform(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0)) throw ParameterError("spectrum_uniform: lo must be positive");
  if (!(hi >= lo)) throw ParameterError("spectrum_uniform: hi must be >= lo");
  if (n < 1) throw ParameterError("spectrum_uniform: n must be >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

/// Random positive definite matrix with spectrum uniform in [lo, hi].
inline SymmetricMatrix random_spd(std::size_t n, Rng& rng, double lo = 1.0, double hi = 10.0) {
  std::vector<double> ev(n);
  for (double& v : ev) v = rng.uniform(lo, hi);
  std::sort(ev.begin(), ev.end());
  return matrix_from_spectrum(ev, sample_random_orthogonal(n, rng));
}

inline Vector random_normal_vector(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

/// Uniform draw from the open probability simplex.
inline std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.uniform01());
    if (v <= 0.0) v = 1e-300;
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

namespace detail {

inline std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("recipe parse error in " + what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

inline std::size_t as_count(double v, const std::string& what) {
  if (!(v >= 1.0) || std::floor(v) != v) throw ParseError("recipe parse error: " + what + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Spectrum from a recipe string: "clustered:5,6,15;100,101,15",
/// "uniform:1,60,30" or "expdecay:0.5,10".
inline std::vector<double> spectrum_from_recipe(const std::string& recipe, Rng& rng) {
  const auto colon = recipe.find(':');
  if (colon == std::string::npos) throw ParseError("recipe parse error: expected '<kind>:<args>' in '" + recipe + "'");
  const std::string kind = recipe.substr(0, colon);
  const std::string args = recipe.substr(colon + 1);
  if (kind == "clustered") {
    std::vector<Cluster> clusters;
    std::stringstream ss(args);
    std::string part;
    while (std::getline(ss, part, ';')) {
      const auto v = detail::parse_numbers(part, ',', "clustered");
      if (v.size() != 3) throw ParseError("recipe parse error: a cluster needs lo,hi,count");
      clusters.push_back({v[0], v[1], detail::as_count(v[2], "cluster count")});
    }
    if (clusters.empty()) throw ParseError("recipe parse error: no clusters given");
    return spectrum_clustered(clusters, rng);
  }
  if (kind == "uniform") {
    const auto v = detail::parse_numbers(args, ',', "uniform");
    if (v.size() != 3) throw ParseError("recipe parse error: uniform needs lo,hi,n");
    return spectrum_uniform(v[0], v[1], detail::as_count(v[2], "n"));
  }
  if (kind == "expdecay") {
    const auto v = detail::parse_numbers(args, ',', "expdecay");
    if (v.size() != 2) throw ParseError("recipe parse error: expdecay needs alpha,n");
    return spectrum_exp_decay(v[0], detail::as_count(v[1], "n"));
  }
  throw ParseError("recipe parse error: unknown spectrum kind '" + kind + "'");
}

/// U·diag(spectrum)·Uᵀ with U random orthogonal drawn after the spectrum.
inline SymmetricMatrix matrix_from_recipe(const std::string& recipe, Rng& rng) {
  const auto ev = spectrum_from_recipe(recipe, rng);
  return matrix_from_spectrum(ev, sample_random_orthogonal(ev.size(), rng));
}

}  // namespace rsd
