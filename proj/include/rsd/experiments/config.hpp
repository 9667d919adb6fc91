#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "rsd/error.hpp"
#include "rsd/experiments/monte_carlo.hpp"

namespace rsd {

namespace detail {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(where + ": unknown field '" + it.key() + "'");
  }
}

}  // namespace detail

inline MethodSpec method_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("method entry must be a JSON object");
  detail::reject_unknown(j, {"kind", "k", "tau", "omega", "alpha", "betas", "p", "eps", "perturbation", "name"},
                         "method");
  MethodSpec m;
  detail::read_field(j, "kind", m.kind);
  detail::read_field(j, "k", m.k);
  detail::read_field(j, "tau", m.tau);
  if (j.contains("omega")) {
    double w = 0;
    detail::read_field(j, "omega", w);
    m.omega = w;
  }
  detail::read_field(j, "alpha", m.alpha);
  if (j.contains("betas")) {
    std::vector<double> b;
    detail::read_field(j, "betas", b);
    m.betas = b;
  }
  detail::read_field(j, "p", m.p);
  detail::read_field(j, "eps", m.eps);
  detail::read_field(j, "perturbation", m.perturbation);
  detail::read_field(j, "name", m.name);
  bool known = false;
  for (const auto& k : method_kinds()) known = known || k == m.kind;
  if (!known) throw ConfigError("unknown method kind '" + m.kind + "'");
  return m;
}

inline ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  detail::reject_unknown(j, {"matrix_recipe", "matrix_seed", "methods", "trials", "iterations", "master_seed",
                             "output_prefix"},
                         "experiment config");
  ExperimentSpec s;
  detail::read_field(j, "matrix_recipe", s.matrix_recipe);
  detail::read_field(j, "matrix_seed", s.matrix_seed);
  detail::read_field(j, "trials", s.trials);
  detail::read_field(j, "iterations", s.iterations);
  detail::read_field(j, "master_seed", s.master_seed);
  detail::read_field(j, "output_prefix", s.output_prefix);
  if (j.contains("methods")) {
    if (!j.at("methods").is_array()) throw ConfigError("config field 'methods' must be an array");
    for (const auto& m : j.at("methods")) s.methods.push_back(method_from_json(m));
  }
  if (s.methods.empty()) throw ConfigError("experiment config lists no methods");
  if (s.trials < 1) throw ConfigError("experiment config: trials must be >= 1");
  return s;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config parse error in " + path + ": " + e.what());
  }
}

}  // namespace rsd
