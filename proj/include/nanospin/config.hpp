#pragma once

#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nanospin/errors.hpp"
#include "nanospin/material.hpp"
#include "nanospin/quadrature.hpp"
#include "nanospin/torque.hpp"

namespace nanospin {

enum class SolverMode { linear, nonlinear };

inline std::string_view to_string(SolverMode m) {
  return m == SolverMode::linear ? "linear" : "nonlinear";
}
inline SolverMode parse_solver_mode(std::string_view s) {
  if (s == "linear") return SolverMode::linear;
  if (s == "nonlinear") return SolverMode::nonlinear;
  throw ConfigError("mode must be \"linear\" or \"nonlinear\", got \"" + std::string(s) + "\"");
}

/// One experiment: NP1 spinning at omega1, NP2 starting at rest a distance away.
struct RunConfig {
  ParticleSpec particle;
  double distance = 0.0;                // m
  double omega1 = 0.0;                  // rad/s
  double environment_temperature = 300.0;  // K (T0)
  QuadratureConfig quad;
  TorqueModel model;
  SolverMode mode = SolverMode::linear;
  double sync_threshold = 0.01;
  int time_samples = 400;
  std::string output_dir = "out";

  ThermalState thermal() const { return {particle.temperature, environment_temperature}; }

  void validate() const {
    particle.validate();
    quad.validate();
    model.validate();
    thermal().validate();
    if (!(particle.temperature > 0.0) || !(environment_temperature > 0.0))
      throw ConfigError("runs require temperature_K > 0 and environment_temperature_K > 0");
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) throw ConfigError("omega1_rad_per_s must be > 0");
    if (!(distance > 0.0) || !std::isfinite(distance)) throw ConfigError("distance_m must be > 0");
    if (distance < kMinDistanceInRadii * particle.radius)
      throw DistanceError("distance_m = " + std::to_string(distance) +
                          " violates distance >= 10 * radius_m (" +
                          std::to_string(kMinDistanceInRadii * particle.radius) + ")");
    if (!(sync_threshold > 0.0 && sync_threshold < 1.0))
      throw ConfigError("sync_threshold must lie in (0, 1)");
    if (time_samples < 2) throw ConfigError("time_samples must be >= 2");
  }
};

struct SweepConfig {
  RunConfig base;
  std::vector<double> distances;  // m

  RunConfig at(double d) const {
    RunConfig c = base;
    c.distance = d;
    return c;
  }

  void validate() const {
    if (distances.empty()) throw ConfigError("distances_m must be nonempty");
    for (double d : distances) at(d).validate();
  }
};

using AnyConfig = std::variant<RunConfig, SweepConfig>;

namespace detail {

inline const std::set<std::string, std::less<>>& known_config_keys() {
  static const std::set<std::string, std::less<>> keys{
      "distance_m",          "distances_m",        "omega1_rad_per_s",
      "radius_m",            "mass_density_kg_per_m3", "temperature_K",
      "environment_temperature_K", "polarizability_model", "eps_inf",
      "omega_L_rad_per_s",   "omega_T_rad_per_s",  "gamma_rad_per_s",
      "rel_tol",             "abs_tol",            "max_subdivisions",
      "omega_max_rad_per_s", "breakpoints_rad_per_s", "occupation",
      "coth_argument",       "vacuum_scale",       "mutual_scale",
      "allow_low_spin_direct", "mode",             "sync_threshold",
      "time_samples",        "output_dir"};
  return keys;
}

inline double get_number(const nlohmann::json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("key \"") + key + "\" must be a number");
  return v.get<double>();
}

inline std::string get_string(const nlohmann::json& doc, const char* key,
                              std::string_view fallback) {
  if (!doc.contains(key)) return std::string(fallback);
  const auto& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(std::string("key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_list(const nlohmann::json& doc, const char* key) {
  std::vector<double> out;
  if (!doc.contains(key)) return out;
  const auto& v = doc.at(key);
  if (!v.is_array()) throw ConfigError(std::string("key \"") + key + "\" must be an array");
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError(std::string("key \"") + key + "\" must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

/// Builds a run from a flat JSON object; missing keys take the documented defaults.
inline RunConfig run_config_from_json(const nlohmann::json& doc, bool require_distance = true) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!detail::known_config_keys().contains(key))
      throw ConfigError("unknown configuration key \"" + key + "\"");

  using detail::get_number;
  RunConfig c;
  if (require_distance && !doc.contains("distance_m"))
    throw ConfigError("missing required key \"distance_m\"");
  if (!doc.contains("omega1_rad_per_s"))
    throw ConfigError("missing required key \"omega1_rad_per_s\"");
  c.distance = get_number(doc, "distance_m", 0.0);
  c.omega1 = get_number(doc, "omega1_rad_per_s", 0.0);

  auto& p = c.particle;
  p.radius = get_number(doc, "radius_m", p.radius);
  p.mass_density = get_number(doc, "mass_density_kg_per_m3", p.mass_density);
  p.temperature = get_number(doc, "temperature_K", p.temperature);
  p.polarizability_model = parse_polarizability_model(
      detail::get_string(doc, "polarizability_model", to_string(p.polarizability_model)));
  p.dielectric.eps_inf = get_number(doc, "eps_inf", p.dielectric.eps_inf);
  p.dielectric.omega_L = get_number(doc, "omega_L_rad_per_s", p.dielectric.omega_L);
  p.dielectric.omega_T = get_number(doc, "omega_T_rad_per_s", p.dielectric.omega_T);
  p.dielectric.gamma = get_number(doc, "gamma_rad_per_s", p.dielectric.gamma);
  c.environment_temperature =
      get_number(doc, "environment_temperature_K", c.environment_temperature);

  c.quad.rel_tol = get_number(doc, "rel_tol", c.quad.rel_tol);
  c.quad.abs_tol = get_number(doc, "abs_tol", c.quad.abs_tol);
  const double subdiv = get_number(doc, "max_subdivisions", c.quad.max_subdivisions);
  if (subdiv != std::floor(subdiv) || subdiv < 1 || subdiv > 1e8)
    throw ConfigError("max_subdivisions must be a positive integer");
  c.quad.max_subdivisions = static_cast<int>(subdiv);
  c.quad.omega_max = get_number(doc, "omega_max_rad_per_s", c.quad.omega_max);
  c.quad.breakpoints = detail::get_number_list(doc, "breakpoints_rad_per_s");

  c.model.occupation =
      parse_occupation(detail::get_string(doc, "occupation", to_string(c.model.occupation)));
  c.model.coth_argument = parse_coth_argument(
      detail::get_string(doc, "coth_argument", to_string(c.model.coth_argument)));
  c.model.vacuum_scale = get_number(doc, "vacuum_scale", c.model.vacuum_scale);
  c.model.mutual_scale = get_number(doc, "mutual_scale", c.model.mutual_scale);
  if (doc.contains("allow_low_spin_direct")) {
    if (!doc.at("allow_low_spin_direct").is_boolean())
      throw ConfigError("key \"allow_low_spin_direct\" must be a boolean");
    c.model.allow_low_spin_direct = doc.at("allow_low_spin_direct").get<bool>();
  }

  c.mode = parse_solver_mode(detail::get_string(doc, "mode", to_string(c.mode)));
  c.sync_threshold = get_number(doc, "sync_threshold", c.sync_threshold);
  const double samples = get_number(doc, "time_samples", c.time_samples);
  if (samples != std::floor(samples) || samples < 2 || samples > 1e7)
    throw ConfigError("time_samples must be an integer >= 2");
  c.time_samples = static_cast<int>(samples);
  c.output_dir = detail::get_string(doc, "output_dir", c.output_dir);

  if (require_distance) c.validate();
  return c;
}

/// A document with "distances_m" is a sweep, one with "distance_m" a single run.
inline AnyConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  const bool sweep = doc.contains("distances_m");
  if (sweep && doc.contains("distance_m"))
    throw ConfigError("give either \"distance_m\" or \"distances_m\", not both");
  if (!sweep) return run_config_from_json(doc);

  SweepConfig s;
  s.distances = detail::get_number_list(doc, "distances_m");
  auto base = doc;
  base.erase("distances_m");
  s.base = run_config_from_json(base, /*require_distance=*/false);
  s.validate();
  return s;
}

/// Canonical flat JSON for a run, the inverse of run_config_from_json.
inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["distance_m"] = c.distance;
  j["omega1_rad_per_s"] = c.omega1;
  j["radius_m"] = c.particle.radius;
  j["mass_density_kg_per_m3"] = c.particle.mass_density;
  j["temperature_K"] = c.particle.temperature;
  j["environment_temperature_K"] = c.environment_temperature;
  j["polarizability_model"] = to_string(c.particle.polarizability_model);
  j["eps_inf"] = c.particle.dielectric.eps_inf;
  j["omega_L_rad_per_s"] = c.particle.dielectric.omega_L;
  j["omega_T_rad_per_s"] = c.particle.dielectric.omega_T;
  j["gamma_rad_per_s"] = c.particle.dielectric.gamma;
  j["rel_tol"] = c.quad.rel_tol;
  j["abs_tol"] = c.quad.abs_tol;
  j["max_subdivisions"] = c.quad.max_subdivisions;
  j["omega_max_rad_per_s"] = c.quad.omega_max;
  j["breakpoints_rad_per_s"] = c.quad.breakpoints;
  j["occupation"] = to_string(c.model.occupation);
  j["coth_argument"] = to_string(c.model.coth_argument);
  j["vacuum_scale"] = c.model.vacuum_scale;
  j["mutual_scale"] = c.model.mutual_scale;
  j["allow_low_spin_direct"] = c.model.allow_low_spin_direct;
  j["mode"] = to_string(c.mode);
  j["sync_threshold"] = c.sync_threshold;
  j["time_samples"] = c.time_samples;
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace nanospin
