#pragma once

// Flat key = value configuration files for flow runs.  Unknown keys are
// rejected; see docs/config.md for the key list.

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "smcf/core.hpp"
#include "smcf/flow.hpp"

namespace smcf::config {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::map<std::string, std::string> parse_kv(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidSpec("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw InvalidSpec("config line " + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw InvalidSpec("config: duplicate key '" + key + "'");
    kv[key] = val;
  }
  return kv;
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidSpec("config: key '" + key + "' is not a number: " + v);
  }
}

inline long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidSpec("config: key '" + key + "' is not an integer: " + v);
  }
}

}  // namespace detail

/// Build a FlowConfig from key = value text.  Every key is validated; unknown
/// keys raise InvalidSpec.
inline flow::FlowConfig parse_flow_config(std::istream& in) {
  auto kv = parse_kv(in);
  flow::FlowConfig cfg;
  cfg.specs = {pinching::PinchingSpec::thm32(1.0)};

  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return "";
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  std::string v;
  if (!(v = take("k")).empty()) cfg.surf.k = detail::to_double("k", v);
  if (!(v = take("family")).empty()) {
    if (v == "complex-line") cfg.surf.family = surface::Family::ComplexLine;
    else if (v == "lagrangian") cfg.surf.family = surface::Family::Lagrangian;
    else if (v == "holomorphic-graph") cfg.surf.family = surface::Family::HolomorphicGraph;
    else if (v == "perturbed-graph") cfg.surf.family = surface::Family::PerturbedGraph;
    else throw InvalidSpec("config: unknown family '" + v + "'");
  }
  if (!(v = take("nu")).empty()) cfg.surf.Nu = static_cast<int>(detail::to_long("nu", v));
  if (!(v = take("nv")).empty()) cfg.surf.Nv = static_cast<int>(detail::to_long("nv", v));
  if (!(v = take("u0")).empty()) cfg.surf.u0 = detail::to_double("u0", v);
  if (!(v = take("u1")).empty()) cfg.surf.u1 = detail::to_double("u1", v);
  if (!(v = take("v0")).empty()) cfg.surf.v0 = detail::to_double("v0", v);
  if (!(v = take("v1")).empty()) cfg.surf.v1 = detail::to_double("v1", v);
  if (!(v = take("c")).empty()) cfg.surf.c = detail::to_double("c", v);
  if (!(v = take("eps")).empty()) cfg.surf.eps = detail::to_double("eps", v);
  if (!(v = take("bump_u")).empty()) cfg.surf.bump_u = detail::to_double("bump_u", v);
  if (!(v = take("bump_v")).empty()) cfg.surf.bump_v = detail::to_double("bump_v", v);
  if (!(v = take("bump_width")).empty())
    cfg.surf.bump_width = detail::to_double("bump_width", v);
  if (!(v = take("deriv_mode")).empty()) {
    if (v == "analytic") cfg.surf.mode = ambient::DerivMode::Analytic;
    else if (v == "fd") cfg.surf.mode = ambient::DerivMode::FiniteDifference;
    else throw InvalidSpec("config: deriv_mode must be 'analytic' or 'fd'");
  }
  if (!(v = take("label")).empty()) cfg.surf.label = v;

  if (!(v = take("c_cfl")).empty()) cfg.c_cfl = detail::to_double("c_cfl", v);
  if (!(v = take("dt_max")).empty()) cfg.dt_max = detail::to_double("dt_max", v);
  if (!(v = take("t_end")).empty()) cfg.t_end = detail::to_double("t_end", v);
  if (!(v = take("g_scale")).empty()) cfg.g_scale = detail::to_double("g_scale", v);
  if (!(v = take("cadence")).empty())
    cfg.cadence = static_cast<int>(detail::to_long("cadence", v));
  if (!(v = take("margin")).empty())
    cfg.margin = static_cast<int>(detail::to_long("margin", v));
  if (!(v = take("seed")).empty())
    cfg.seed = static_cast<std::uint64_t>(detail::to_long("seed", v));
  if (!(v = take("residual_gate")).empty())
    cfg.residual_gate = detail::to_double("residual_gate", v);
  if (!(v = take("scheme")).empty()) {
    if (v == "euler") cfg.scheme = flow::Scheme::Euler;
    else if (v == "midpoint") cfg.scheme = flow::Scheme::Midpoint;
    else throw InvalidSpec("config: scheme must be 'euler' or 'midpoint'");
  }
  if (!(v = take("specs")).empty()) {
    cfg.specs.clear();
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok == "thm32") cfg.specs.push_back(pinching::PinchingSpec::thm32(cfg.surf.k));
      else if (tok == "thm51") cfg.specs.push_back(pinching::PinchingSpec::thm51(cfg.surf.k));
      else throw InvalidSpec("config: unknown spec '" + tok + "'");
    }
    if (cfg.specs.empty()) throw InvalidSpec("config: empty spec list");
  }
  // keep spec k in sync with the surface k
  for (auto& s : cfg.specs) s.k = cfg.surf.k;

  if (!kv.empty()) throw InvalidSpec("config: unknown key '" + kv.begin()->first + "'");
  cfg.validate();
  return cfg;
}

inline flow::FlowConfig load_flow_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open config file: " + path);
  return parse_flow_config(in);
}

}  // namespace smcf::config
