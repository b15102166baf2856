// nanospin: quantum-friction synchronization of two rotating nanoparticles.
//
//   nanospin run    --config run.json   [--out DIR] [--mode linear|nonlinear]
//   nanospin sweep  --config sweep.json [--out DIR] [--jobs N]
//   nanospin coeffs --distance 1e-7     [--config base.json] [overrides...]
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 numerical failure, 4 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "nanospin/nanospin.hpp"

namespace {

using namespace nanospin;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_run(const RunResult& r, const std::filesystem::path& dir) {
  const auto& c = r.coefficients.coeffs;
  std::printf("distance_m        %s\n", format_number(r.config.distance).c_str());
  std::printf("gamma_s_Nms       %s\n", format_number(c.gamma_s).c_str());
  std::printf("gamma_b_Nms       %s\n", format_number(c.gamma_b).c_str());
  std::printf("delta_inf         %s\n", format_number(r.delta_inf).c_str());
  std::printf("sync_time_s       %s\n", r.sync ? format_number(*r.sync).c_str() : "none");
  std::printf("output            %s\n", dir.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-friction torques and rotational synchronization of two nanoparticles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string mode;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* run_cmd = app.add_subcommand("run", "single run: coefficients, trajectory, summary");
  run_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
  run_cmd->add_option("--mode", mode, "solver mode")->check(CLI::IsMember({"linear", "nonlinear"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "distance sweep");
  sweep_cmd->add_option("--config", config_path, "sweep configuration (JSON)")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
  sweep_cmd->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--mode", mode, "solver mode")->check(CLI::IsMember({"linear", "nonlinear"}));

  double distance = 0.0;
  double radius = 0.0;
  double temperature = 0.0;
  double env_temperature = 0.0;
  std::string model;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "print gamma_s, gamma_b and delta_inf");
  coeffs_cmd->add_option("--distance", distance, "separation in m")->required();
  coeffs_cmd->add_option("--config", config_path, "base configuration (JSON, optional)");
  coeffs_cmd->add_option("--radius", radius, "particle radius in m");
  coeffs_cmd->add_option("--temperature", temperature, "particle temperature in K");
  coeffs_cmd->add_option("--environment-temperature", env_temperature, "vacuum temperature in K");
  coeffs_cmd->add_option("--polarizability-model", model, "bare or clausius_mossotti")
      ->check(CLI::IsMember({"bare", "clausius_mossotti"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; malformed arguments are configuration errors.
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      auto parsed = parse_config(read_file(config_path));
      if (!std::holds_alternative<RunConfig>(parsed))
        throw ConfigError("run expects a single-distance configuration; use `nanospin sweep`");
      auto cfg = std::get<RunConfig>(parsed);
      if (!mode.empty()) cfg.mode = parse_solver_mode(mode);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      const auto r = run(cfg);
      print_run(r, cfg.output_dir);
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      auto parsed = parse_config(read_file(config_path));
      SweepConfig sweep;
      if (auto* single = std::get_if<RunConfig>(&parsed)) {
        sweep.base = *single;
        sweep.distances = {single->distance};
      } else {
        sweep = std::get<SweepConfig>(parsed);
      }
      if (!mode.empty()) sweep.base.mode = parse_solver_mode(mode);
      if (!out_dir.empty()) sweep.base.output_dir = out_dir;
      const auto result = run_sweep(sweep, jobs);
      std::printf("%s", sweep_table_csv(result).c_str());
      for (const auto& e : result.entries)
        if (!e.error.empty())
          std::fprintf(stderr, "nanospin: run at %s m failed: %s\n",
                       format_number(e.distance).c_str(), e.error.c_str());
      return result.exit_code();
    }

    if (coeffs_cmd->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) {
        auto doc = nlohmann::json::parse(read_file(config_path), nullptr, false);
        if (doc.is_discarded()) throw ConfigError("configuration is not valid JSON");
        doc.erase("distance_m");
        doc.erase("distances_m");
        cfg = run_config_from_json(doc, /*require_distance=*/false);
      } else {
        cfg.omega1 = 1e4;
      }
      cfg.distance = distance;
      if (radius > 0.0) cfg.particle.radius = radius;
      if (temperature > 0.0) cfg.particle.temperature = temperature;
      if (env_temperature > 0.0) cfg.environment_temperature = env_temperature;
      if (!model.empty()) cfg.particle.polarizability_model = parse_polarizability_model(model);
      cfg.validate();
      const auto c = friction_coefficients(cfg).coeffs;
      std::printf("gamma_s_Nms %s\n", format_number(c.gamma_s).c_str());
      std::printf("gamma_b_Nms %s\n", format_number(c.gamma_b).c_str());
      std::printf("delta_inf %s\n", format_number(delta_infinity(c)).c_str());
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nanospin: error: %s\n", e.what());
    return exit_code_for(e);
  }
  return kExitOk;
}
