// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   acceptance [output_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "nanospin/nanospin.hpp"

namespace fs = std::filesystem;
using namespace nanospin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

RunConfig defaults_at(double d) {
  RunConfig c;
  c.distance = d;
  c.omega1 = 1e4;
  return c;
}

const std::vector<double> kFigureDistances{5e-8, 1e-7, 2e-7, 5e-7};

Outcome sync_ratio() {
  const auto near = compute_run(defaults_at(5e-8));
  const auto far = compute_run(defaults_at(1e-7));
  if (!near.sync || !far.sync) return {false, "a run did not synchronize"};
  const double ratio = *far.sync / *near.sync;
  return {ratio >= 40.0 && ratio <= 90.0,
          "t(100nm)/t(50nm) = " + fmt("%.4g", ratio) + " (" + fmt("%.4g", *far.sync) + " s / " +
              fmt("%.4g", *near.sync) + " s), want [40, 90]"};
}

Outcome monotone_sync() {
  std::vector<RunResult> runs;
  for (double d : kFigureDistances) runs.push_back(compute_run(defaults_at(d)));
  bool ok = true;
  std::string detail = "delta_inf";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& s = runs[i].trajectory.samples;
    for (std::size_t k = 1; k < s.size(); ++k) ok = ok && s[k].delta <= s[k - 1].delta;
    detail += " " + fmt("%.3g", runs[i].delta_inf);
    if (i > 0) {
      const auto inf = std::numeric_limits<double>::infinity();
      ok = ok && runs[i].delta_inf > runs[i - 1].delta_inf;
      ok = ok && runs[i].sync.value_or(inf) > runs[i - 1].sync.value_or(inf);
    }
  }
  detail += "; sync_time_s";
  for (const auto& r : runs) detail += " " + (r.sync ? fmt("%.3g", *r.sync) : std::string("none"));
  return {ok, detail};
}

Outcome mutual_structure() {
  const ParticleSpec p;
  const double d = 1e-7;
  TorqueModel model;
  model.allow_low_spin_direct = true;
  QuadratureConfig q;
  // Cancellation noise in the bracket sits near gamma_b * 1e-2 rad/s.
  q.abs_tol = gamma_b(d, p, 300.0, q).value * 1.0;

  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> exponent(3.0, 12.0);
  std::bernoulli_distribution negative(0.5);
  auto draw = [&] { return (negative(rng) ? -1.0 : 1.0) * std::pow(10.0, exponent(rng)); };

  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double a = draw();
    const double b = draw();
    const double ab = mutual_torque({a, b}, d, p, 300.0, q, model).value;
    const double ba = mutual_torque({b, a}, d, p, 300.0, q, model).value;
    if (ab == 0.0 && ba == 0.0) continue;
    worst = std::max(worst, std::abs(ab + ba) / std::max(std::abs(ab), std::abs(ba)));
  }
  double zero = 0.0;
  for (double w : {0.0, 1e4, 1e8, 1e3, 1e10, -3e11, 1e12})
    zero = std::max(zero, std::abs(mutual_torque({w, w}, d, p, 300.0, q, model).value));
  return {worst <= 1e-10 && zero <= q.abs_tol,
          "worst antisymmetry " + fmt("%.3g", worst) + " over 50 pairs; max |M_B(w,w)| = " +
              fmt("%.3g", zero) + " N m (abs_tol " + fmt("%.3g", q.abs_tol) + ")"};
}

Outcome vacuum_structure() {
  const ParticleSpec p;
  const ThermalState room{300.0, 300.0};
  QuadratureConfig q;
  q.abs_tol = gamma_s(p, room, q).value * 1.0;
  const double zero = vacuum_torque(0.0, p, room, q).value;
  const double plus = vacuum_torque(1e10, p, room, q).value;
  const double minus = vacuum_torque(-1e10, p, room, q).value;
  const double parity = std::abs(plus + minus) / std::abs(plus);
  return {std::abs(zero) <= q.abs_tol && parity <= 1e-8,
          "M_S(0) = " + fmt("%.3g", zero) + " N m; parity " + fmt("%.3g", parity) +
              " at 1e10 rad/s"};
}

Outcome linearization() {
  const ParticleSpec p;
  const ThermalState room{300.0, 300.0};
  QuadratureConfig q;
  const double w0 = 1e10;
  const double gs = gamma_s(p, room, q).value;
  const double gb = gamma_b(1e-7, p, 300.0, q).value;
  const double es = rel(vacuum_torque(w0, p, room, q).value / w0, gs);
  const double eb = rel(mutual_torque({w0, 0.0}, 1e-7, p, 300.0, q).value / w0, gb);
  return {es <= 1e-2 && eb <= 1e-2,
          "M_S/w0 vs gamma_s " + fmt("%.3g", es) + ", M_B/w0 vs gamma_b " + fmt("%.3g", eb)};
}

Outcome near_field_scaling() {
  const ParticleSpec p;
  QuadratureConfig q;
  const double ratio = gamma_b(5e-8, p, 300.0, q).value / gamma_b(1e-7, p, 300.0, q).value;
  return {ratio >= 63.0 && ratio <= 65.0,
          "gamma_b(50nm)/gamma_b(100nm) = " + fmt("%.5g", ratio) + ", want [63, 65]"};
}

Outcome green_self_limit() {
  using R = boost::multiprecision::cpp_bin_float_50;
  const double omega = 1e14;
  const R k = R(omega) / R(constants::c);
  const R limit = R(2) * k / R(3);
  std::vector<double> err;
  for (double kr : {1e-3, 1e-4, 1e-5}) {
    const auto g = dyadic_green<R>({R(0), R(0), R(kr) / k}, k);
    err.push_back(static_cast<double>(abs(g.im[0][0] - limit) / limit));
  }
  const double r1 = err[0] / err[1];
  const double r2 = err[1] / err[2];
  return {std::abs(r1 - 100.0) <= 20.0 && std::abs(r2 - 100.0) <= 20.0,
          "errors " + fmt("%.3g", err[0]) + ", " + fmt("%.3g", err[1]) + ", " +
              fmt("%.3g", err[2]) + "; ratios " + fmt("%.5g", r1) + ", " + fmt("%.5g", r2)};
}

Outcome solver_equivalence() {
  auto c = defaults_at(1e-7);
  c.model.allow_low_spin_direct = true;
  const auto est = friction_coefficients(c).coeffs;
  const double inertia = moment_of_inertia(c.particle);
  const auto grid = default_time_grid(relaxation_time(inertia, est), c.time_samples);
  const auto lin = solve_linear(c.omega1, inertia, est, grid);
  const auto nl = solve_nonlinear(c, grid);
  double worst = 0.0;
  bool ok = lin.samples.size() == nl.samples.size();
  for (std::size_t i = 0; ok && i < lin.samples.size(); ++i) {
    const double a = lin.samples[i].omega2;
    const double b = nl.samples[i].omega2;
    if (a == 0.0) {
      ok = b == 0.0;
      continue;
    }
    worst = std::max(worst, rel(b, a));
  }
  return {ok && worst <= 1e-3, "worst pointwise relative deviation " + fmt("%.3g", worst) +
                                   " over " + std::to_string(lin.samples.size()) + " samples"};
}

Outcome robustness() {
  const ParticleSpec p;
  const ThermalState room{300.0, 300.0};
  QuadratureConfig q;
  QuadratureConfig half = q;
  half.rel_tol = 0.5 * q.rel_tol;
  double worst_q = rel(gamma_s(p, room, half).value, gamma_s(p, room, q).value);
  for (double d : kFigureDistances)
    worst_q = std::max(worst_q, rel(gamma_b(d, p, 300.0, half).value, gamma_b(d, p, 300.0, q).value));

  double worst_d = 0.0;
  for (auto model : {PolarizabilityModel::bare, PolarizabilityModel::clausius_mossotti}) {
    ParticleSpec pm;
    pm.polarizability_model = model;
    for (int i = 0; i < 20; ++i) {
      const double w = std::pow(10.0, 10.0 + 6.0 * i / 19.0);
      const double h = 1e-5 * std::min(w, pm.dielectric.gamma);
      const double fd = (im_polarizability(w + h, pm) - im_polarizability(w - h, pm)) / (2.0 * h);
      worst_d = std::max(worst_d, rel(fd, d_im_polarizability(w, pm)));
    }
  }
  return {worst_q < 5e-9 && worst_d <= 1e-6,
          "rel_tol halving changes coefficients by " + fmt("%.3g", worst_q) +
              "; derivative vs central difference " + fmt("%.3g", worst_d)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome end_to_end(const fs::path& out) {
  SweepConfig sweep;
  sweep.base = defaults_at(kFigureDistances.front());
  sweep.distances = kFigureDistances;
  const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  fs::remove_all(out / "sweep_a");
  fs::remove_all(out / "sweep_b");

  const auto t0 = std::chrono::steady_clock::now();
  const auto first = run_sweep(sweep, out / "sweep_a", jobs);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto second = run_sweep(sweep, out / "sweep_b", jobs);

  bool identical = first.ok() && second.ok();
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(out / "sweep_a")) {
    if (!entry.is_regular_file()) continue;
    const auto other = out / "sweep_b" / fs::relative(entry.path(), out / "sweep_a");
    identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
    ++files;
  }
  return {identical && files == 10 && seconds < 60.0,
          "sweep took " + fmt("%.3g", seconds) + " s; " + std::to_string(files) + " files " +
              (identical ? "byte-identical" : "DIFFER") + " across repeats"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? argv[1] : "acceptance_out";
  fs::create_directories(out);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "sync-time ratio", 10.0, sync_ratio},
      {2, "monotone synchronization", 30.0, monotone_sync},
      {3, "mutual torque antisymmetry and zero", 60.0, mutual_structure},
      {4, "vacuum torque zero and parity", 0.0, vacuum_structure},
      {5, "linearization oracles", 0.0, linearization},
      {6, "near-field scaling", 0.0, near_field_scaling},
      {7, "Green tensor self-limit", 0.0, green_self_limit},
      {8, "nonlinear vs linear solver", 0.0, solver_equivalence},
      {9, "numerical robustness", 0.0, robustness},
      {10, "end-to-end sweep", 0.0, [&] { return end_to_end(out); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && s >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    failures += !o.pass;
    std::printf("criterion %2d  %s  %-38s %s [%.3f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
