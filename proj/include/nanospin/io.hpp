#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "nanospin/config.hpp"
#include "nanospin/dynamics.hpp"
#include "nanospin/errors.hpp"

namespace nanospin {

inline constexpr std::string_view kSummarySchema = "nanospin.run_summary/1";
inline constexpr std::string_view kSweepSchema = "nanospin.sweep_summary/1";
inline constexpr std::string_view kTrajectoryHeader = "time_s,omega2_rad_per_s,delta";

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Shortest-roundtrip-safe decimal: 17 significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// FNV-1a 64 of the canonical configuration, without output location.
inline std::string config_fingerprint(const RunConfig& c) {
  auto j = to_json(c);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const auto& s : traj.samples) {
    out += format_number(s.time);
    out += ',';
    out += format_number(s.omega2);
    out += ',';
    out += format_number(s.delta);
    out += '\n';
  }
  return out;
}

inline Trajectory parse_trajectory_csv(std::string_view text, double omega1 = 0.0) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw ConfigError("trajectory CSV: missing or unexpected header");
  Trajectory traj;
  traj.omega1 = omega1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TrajectorySample s{};
    char* end = nullptr;
    const char* p = line.c_str();
    s.time = std::strtod(p, &end);
    if (*end != ',') throw ConfigError("trajectory CSV: malformed row \"" + line + "\"");
    s.omega2 = std::strtod(end + 1, &end);
    if (*end != ',') throw ConfigError("trajectory CSV: malformed row \"" + line + "\"");
    s.delta = std::strtod(end + 1, &end);
    if (*end != '\0') throw ConfigError("trajectory CSV: malformed row \"" + line + "\"");
    traj.samples.push_back(s);
  }
  return traj;
}

/// Everything a run computes, before anything touches the disk.
struct RunResult {
  RunConfig config;
  CoefficientEstimate coefficients;
  double inertia = 0.0;
  double delta_inf = 0.0;
  double tau = 0.0;
  Trajectory trajectory;
  std::optional<double> sync;
  std::optional<double> sync_closed_form;
  std::string fingerprint;
};

inline RunResult compute_run(const RunConfig& config) {
  config.validate();
  RunResult r;
  r.config = config;
  r.fingerprint = config_fingerprint(config);
  r.coefficients = friction_coefficients(config);
  const auto& c = r.coefficients.coeffs;
  if (!(c.gamma_s >= 0.0 && c.gamma_b >= 0.0))
    throw ConvergenceError("friction coefficients came out negative (gamma_s = " +
                           format_number(c.gamma_s) + ", gamma_b = " + format_number(c.gamma_b) +
                           "); the chosen conventions do not give drag");
  r.inertia = moment_of_inertia(config.particle);
  r.delta_inf = delta_infinity(c);
  r.tau = relaxation_time(r.inertia, c);
  const auto grid = default_time_grid(r.tau, config.time_samples);
  r.trajectory = config.mode == SolverMode::linear
                     ? solve_linear(config.omega1, r.inertia, c, grid)
                     : solve_nonlinear(config, grid);
  r.sync = sync_time(r.trajectory, config.sync_threshold);
  if (config.mode == SolverMode::linear)
    r.sync_closed_form = sync_time_closed_form(r.inertia, c, config.sync_threshold);
  return r;
}

namespace detail {
inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
inline nlohmann::ordered_json quad_json(const QuadratureResult& q) {
  nlohmann::ordered_json j;
  j["error_estimate_Nms"] = q.error;
  j["evaluations"] = q.evaluations;
  j["panels"] = q.panels;
  return j;
}
}  // namespace detail

inline nlohmann::ordered_json run_summary(const RunResult& r) {
  const auto& cfg = r.config;
  nlohmann::ordered_json j;
  j["schema"] = kSummarySchema;
  j["fingerprint"] = r.fingerprint;
  j["mode"] = to_string(cfg.mode);
  j["distance_m"] = cfg.distance;
  j["omega1_rad_per_s"] = cfg.omega1;
  j["radius_m"] = cfg.particle.radius;
  j["temperature_K"] = cfg.particle.temperature;
  j["environment_temperature_K"] = cfg.environment_temperature;
  j["moment_of_inertia_kg_m2"] = r.inertia;
  j["gamma_s_Nms"] = r.coefficients.coeffs.gamma_s;
  j["gamma_b_Nms"] = r.coefficients.coeffs.gamma_b;
  j["delta_inf"] = r.delta_inf;
  j["relaxation_time_s"] = r.tau;
  j["sync_threshold"] = cfg.sync_threshold;
  j["sync_time_s"] = detail::optional_number(r.sync);
  j["sync_time_closed_form_s"] = detail::optional_number(r.sync_closed_form);
  j["final_delta"] = r.trajectory.samples.back().delta;
  j["samples"] = r.trajectory.samples.size();
  j["trajectory_csv"] = "trajectory.csv";
  j["quadrature"]["gamma_s"] = detail::quad_json(r.coefficients.gamma_s_quad);
  j["quadrature"]["gamma_b"] = detail::quad_json(r.coefficients.gamma_b_quad);
  j["config"] = to_json(cfg);
  return j;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

inline void write_run(const RunResult& r, const std::filesystem::path& dir) {
  write_text_file(dir / "trajectory.csv", trajectory_csv(r.trajectory));
  write_text_file(dir / "summary.json", run_summary(r).dump(2) + "\n");
}

/// Computes a run and writes trajectory.csv and summary.json into dir.
inline RunResult run(const RunConfig& config, const std::filesystem::path& dir) {
  auto r = compute_run(config);
  write_run(r, dir);
  return r;
}

inline RunResult run(const RunConfig& config) { return run(config, config.output_dir); }

/// Exit code matching an exception thrown by the library.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitConfig;
  return kExitNumerical;
}

struct SweepEntry {
  double distance = 0.0;
  std::optional<RunResult> result;
  std::string error;
  int exit_code = kExitOk;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // sorted by distance
  bool ok() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const auto& e) { return e.exit_code == kExitOk; });
  }
  int exit_code() const {
    for (const auto& e : entries)
      if (e.exit_code != kExitOk) return e.exit_code;
    return kExitOk;
  }
};

inline std::string run_directory_name(double distance) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "d_%.6gnm", distance * 1e9);
  return buf;
}

/// distance_m,gamma_b_Nms,delta_inf,sync_time_s; empty field when no sync.
inline std::string sweep_table_csv(const SweepResult& sweep) {
  std::string out = "distance_m,gamma_b_Nms,delta_inf,sync_time_s\n";
  for (const auto& e : sweep.entries) {
    if (!e.result) continue;
    const auto& r = *e.result;
    out += format_number(e.distance) + ',' + format_number(r.coefficients.coeffs.gamma_b) + ',' +
           format_number(r.delta_inf) + ',' + (r.sync ? format_number(*r.sync) : "") + '\n';
  }
  return out;
}

inline nlohmann::ordered_json sweep_summary(const SweepResult& sweep) {
  nlohmann::ordered_json j;
  j["schema"] = kSweepSchema;
  j["ok"] = sweep.ok();
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& e : sweep.entries) {
    nlohmann::ordered_json row;
    row["distance_m"] = e.distance;
    row["directory"] = run_directory_name(e.distance);
    if (e.result) {
      row["fingerprint"] = e.result->fingerprint;
      row["gamma_s_Nms"] = e.result->coefficients.coeffs.gamma_s;
      row["gamma_b_Nms"] = e.result->coefficients.coeffs.gamma_b;
      row["delta_inf"] = e.result->delta_inf;
      row["sync_time_s"] = detail::optional_number(e.result->sync);
    } else {
      row["error"] = e.error;
      row["exit_code"] = e.exit_code;
    }
    j["runs"].push_back(row);
  }
  return j;
}

/// Runs every distance (up to `jobs` at a time), writing each into its own
/// subdirectory plus a combined table. A failed run is recorded and the rest
/// still complete. Output does not depend on `jobs`.
inline SweepResult run_sweep(const SweepConfig& sweep, const std::filesystem::path& dir,
                             int jobs = 1) {
  sweep.validate();
  std::vector<double> distances = sweep.distances;
  std::sort(distances.begin(), distances.end());
  distances.erase(std::unique(distances.begin(), distances.end()), distances.end());

  SweepResult out;
  out.entries.resize(distances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < distances.size(); i = next++) {
      auto& entry = out.entries[i];
      entry.distance = distances[i];
      try {
        entry.result = run(sweep.at(distances[i]), dir / run_directory_name(distances[i]));
      } catch (const std::exception& e) {
        entry.error = e.what();
        entry.exit_code = exit_code_for(e);
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(distances.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  write_text_file(dir / "sweep.csv", sweep_table_csv(out));
  write_text_file(dir / "sweep_summary.json", sweep_summary(out).dump(2) + "\n");
  return out;
}

inline SweepResult run_sweep(const SweepConfig& sweep, int jobs = 1) {
  return run_sweep(sweep, sweep.base.output_dir, jobs);
}

}  // namespace nanospin
