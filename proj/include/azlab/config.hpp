#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "azlab/assembly.hpp"
#include "azlab/energy.hpp"
#include "azlab/errors.hpp"
#include "azlab/solvers.hpp"

namespace azlab {

/// Everything a pipeline run needs, as parsed from a line-oriented
/// `section.key = value` file.
struct ProblemConfig {
  double p = 2.0;
  double kappa = 0.0;
  double length = 1.0;
  int mesh_n = 255;

  std::string family = "zero";  // zero | smoothPower | purePower | linearBounded
  double lambda = 0.0;
  double mu = 0.0;
  double q = 2.0;
  bool q_given = false;

  double tol_residual = 1e-10;
  int max_iter = 200;
  int starts = 64;
  std::uint64_t seed = 1;

  int spectrum_count = 64;

  double rho = 0.0;  // 0 = automatic 0.1 (1 + |u0|)
  double r = 0.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_number(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (...) {
    throw BadConfig("line " + std::to_string(line) + ": key '" + key +
                    "' expects a number, got '" + v + "'");
  }
}

inline int parse_int(const std::string& v, const std::string& key, int line) {
  const double x = parse_number(v, key, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw BadConfig("line " + std::to_string(line) + ": key '" + key + "' expects an integer");
  return i;
}

}  // namespace detail

/// Parse `section.key = value` lines ('#' starts a comment). Unknown keys
/// are rejected with their line number. extra_keys, when given, receives
/// keys outside the config schema that start with one of the listed prefixes
/// (the scenario loader uses this for its expectation blocks).
inline ProblemConfig parse_config_text(const std::string& text,
                                       std::map<std::string, std::string>* extra_keys = nullptr,
                                       const std::vector<std::string>& extra_prefixes = {}) {
  ProblemConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool q_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw BadConfig("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw BadConfig("line " + std::to_string(lineno) + ": empty key or value");

    bool is_extra = false;
    for (const auto& p : extra_prefixes)
      if (key.rfind(p, 0) == 0) {
        is_extra = true;
        break;
      }
    if (is_extra) {
      if (extra_keys) (*extra_keys)[key] = value;
      continue;
    }

    if (key == "problem.p")
      cfg.p = detail::parse_number(value, key, lineno);
    else if (key == "problem.kappa")
      cfg.kappa = detail::parse_number(value, key, lineno);
    else if (key == "domain.length")
      cfg.length = detail::parse_number(value, key, lineno);
    else if (key == "mesh.n")
      cfg.mesh_n = detail::parse_int(value, key, lineno);
    else if (key == "nonlinearity.family")
      cfg.family = value;
    else if (key == "nonlinearity.lambda")
      cfg.lambda = detail::parse_number(value, key, lineno);
    else if (key == "nonlinearity.mu")
      cfg.mu = detail::parse_number(value, key, lineno);
    else if (key == "nonlinearity.q") {
      cfg.q = detail::parse_number(value, key, lineno);
      q_seen = true;
    } else if (key == "solver.tolResidual")
      cfg.tol_residual = detail::parse_number(value, key, lineno);
    else if (key == "solver.maxIter")
      cfg.max_iter = detail::parse_int(value, key, lineno);
    else if (key == "solver.starts")
      cfg.starts = detail::parse_int(value, key, lineno);
    else if (key == "solver.seed")
      cfg.seed = static_cast<std::uint64_t>(detail::parse_int(value, key, lineno));
    else if (key == "spectrum.count")
      cfg.spectrum_count = detail::parse_int(value, key, lineno);
    else if (key == "reduction.rho")
      cfg.rho = detail::parse_number(value, key, lineno);
    else if (key == "reduction.r")
      cfg.r = detail::parse_number(value, key, lineno);
    else
      throw BadConfig("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  cfg.q_given = q_seen;

  // re-validate the numeric constraints of the underlying types
  if (!(cfg.p > 1.0)) throw BadConfig("problem.p must be > 1");
  if (!(cfg.kappa >= 0.0)) throw BadConfig("problem.kappa must be >= 0");
  if (!(cfg.length > 0.0)) throw BadConfig("domain.length must be > 0");
  if (cfg.mesh_n < 1) throw BadConfig("mesh.n must be >= 1");
  if (!(cfg.tol_residual > 0.0)) throw BadConfig("solver.tolResidual must be > 0");
  if (cfg.max_iter < 1) throw BadConfig("solver.maxIter must be >= 1");
  if (cfg.starts < 1) throw BadConfig("solver.starts must be >= 1");
  if (cfg.spectrum_count < 1) throw BadConfig("spectrum.count must be >= 1");
  if (cfg.family != "zero" && cfg.family != "smoothPower" && cfg.family != "purePower" &&
      cfg.family != "linearBounded")
    throw BadConfig("nonlinearity.family must be zero, smoothPower, purePower or linearBounded");
  // family-specific exponent windows (checked again at construction)
  if (cfg.family == "smoothPower") {
    const double q = cfg.q_given ? cfg.q : 1.0;
    if (!(q > 0.0 && q < cfg.p && cfg.p <= 2.0))
      throw BadConfig("smoothPower requires 0 < q < p <= 2");
  }
  if (cfg.family == "purePower") {
    const double q = cfg.q_given ? cfg.q : 2.0;
    if (!(q >= 2.0 && q < cfg.p)) throw BadConfig("purePower requires 2 <= q < p");
  }
  return cfg;
}

inline ProblemConfig parse_config(const std::string& path,
                                  std::map<std::string, std::string>* extra_keys = nullptr,
                                  const std::vector<std::string>& extra_prefixes = {}) {
  std::ifstream f(path);
  if (!f) throw BadConfig("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), extra_keys, extra_prefixes);
}

inline Nonlinearity make_nonlinearity(const ProblemConfig& cfg) {
  if (cfg.family == "smoothPower")
    return smooth_power(cfg.p, cfg.lambda, cfg.mu, cfg.q_given ? cfg.q : 1.0);
  if (cfg.family == "purePower")
    return pure_power(cfg.p, cfg.lambda, cfg.mu, cfg.q_given ? cfg.q : 2.0);
  if (cfg.family == "linearBounded") return linear_bounded(cfg.p, cfg.lambda, cfg.mu);
  return linear_bounded(cfg.p, 0.0, 0.0);  // zero
}

inline EnergySpec make_energy_spec(const ProblemConfig& cfg) {
  return EnergySpec(PrincipalPart(cfg.p, cfg.kappa), make_nonlinearity(cfg));
}

inline SolverConfig make_solver_config(const ProblemConfig& cfg) {
  SolverConfig sc;
  sc.tol_residual = cfg.tol_residual;
  sc.max_iter = cfg.max_iter;
  sc.rng_seed = cfg.seed;
  return sc;
}

}  // namespace azlab
