#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nanospin/config.hpp"
#include "nanospin/errors.hpp"
#include "nanospin/material.hpp"
#include "nanospin/torque.hpp"

namespace nanospin {

struct RotorState {
  double omega1;  // rad/s, held fixed
  double omega2;  // rad/s
  double time;    // s
};

struct TrajectorySample {
  double time;    // s
  double omega2;  // rad/s
  double delta;
};

struct Trajectory {
  double omega1 = 0.0;
  std::vector<TrajectorySample> samples;
  bool uncoupled = false;  // gamma_s + gamma_b == 0: NP2 never moves
};

/// Solid sphere about a diameter: (2/5) m a^2.
inline double moment_of_inertia(const ParticleSpec& particle) {
  particle.validate();
  return 0.4 * particle.mass() * particle.radius * particle.radius;
}

/// (omega1 - omega2) / omega1: 1 with NP2 at rest, 0 when the spins match.
inline double delta_measure(double omega1, double omega2) {
  if (omega1 == 0.0) throw std::invalid_argument("delta_measure requires omega1 != 0");
  return (omega1 - omega2) / omega1;
}

/// Long-time value of delta under linear friction.
inline double delta_infinity(const FrictionCoefficients& c) {
  const double total = c.gamma_s + c.gamma_b;
  return total > 0.0 ? c.gamma_s / total : 1.0;
}

/// I / (gamma_s + gamma_b).
inline double relaxation_time(double inertia, const FrictionCoefficients& c) {
  return inertia / (c.gamma_s + c.gamma_b);
}

/// t = 0 followed by `count` log-spaced samples over [1e-3, 1e3] * tau.
inline std::vector<double> default_time_grid(double tau, int count = 400) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("time grid requires a finite positive relaxation time");
  if (count < 2) throw std::invalid_argument("time grid requires at least 2 samples");
  std::vector<double> grid{0.0};
  grid.reserve(count + 1);
  const double lo = std::log10(1e-3 * tau);
  const double hi = std::log10(1e3 * tau);
  for (int i = 0; i < count; ++i)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * i / (count - 1)));
  return grid;
}

namespace detail {
inline void require_time_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  if (t_grid.front() < 0.0) throw std::invalid_argument("time grid must start at t >= 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
}
}  // namespace detail

/// Closed-form solution of I dw2/dt = gamma_b (w1 - w2) - gamma_s w2 with w2(0) = 0.
inline Trajectory solve_linear(double omega1, double inertia, const FrictionCoefficients& coeffs,
                               std::span<const double> t_grid) {
  if (!(omega1 > 0.0)) throw std::invalid_argument("solve_linear requires omega1 > 0");
  if (!(inertia > 0.0)) throw std::invalid_argument("solve_linear requires inertia > 0");
  if (!(coeffs.gamma_s >= 0.0 && coeffs.gamma_b >= 0.0))
    throw std::invalid_argument("friction coefficients must be >= 0");
  detail::require_time_grid(t_grid);

  Trajectory traj;
  traj.omega1 = omega1;
  const double total = coeffs.gamma_s + coeffs.gamma_b;
  traj.uncoupled = !(total > 0.0);
  traj.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    double w2 = 0.0;
    if (!traj.uncoupled)
      w2 = omega1 * (coeffs.gamma_b / total) * -std::expm1(-total * t / inertia);
    traj.samples.push_back({t, w2, delta_measure(omega1, w2)});
  }
  return traj;
}

/// Friction coefficients for a run, with the quadrature diagnostics.
struct CoefficientEstimate {
  FrictionCoefficients coeffs;
  QuadratureResult gamma_s_quad;
  QuadratureResult gamma_b_quad;
};

inline CoefficientEstimate friction_coefficients(const RunConfig& config) {
  const auto gs = gamma_s(config.particle, config.thermal(), config.quad, config.model);
  const auto gb = gamma_b(config.distance, config.particle, config.particle.temperature,
                          config.quad, config.model);
  return {{gs.value, gb.value}, gs.quad, gb.quad};
}

/// Integrates I dw2/dt = M_B(w1, w2) - M_S(w2) with the full torque integrals
/// re-evaluated at every stage. Classic RK4 with step doubling (relative 1e-6),
/// landing exactly on every requested time.
inline Trajectory solve_nonlinear(const RunConfig& config, std::span<const double> t_grid) {
  config.validate();
  detail::require_time_grid(t_grid);
  const double w1 = config.omega1;
  const double inertia = moment_of_inertia(config.particle);
  const auto lin = friction_coefficients(config).coeffs;
  const double total = lin.gamma_s + lin.gamma_b;
  if (!(total > 0.0)) throw ConvergenceError("nonlinear solve requires nonzero friction");
  const double tau = inertia / total;

  // Torques only need to be accurate relative to the drive scale; asking for
  // more would chase binary64 noise in the cancelling brackets.
  QuadratureConfig q = config.quad;
  q.abs_tol = std::max(q.abs_tol, 1e-5 * total * w1);
  const auto thermal = config.thermal();

  auto rate = [&](double w2) {
    const double mb = mutual_torque({w1, w2}, config.distance, config.particle,
                                    config.particle.temperature, q, config.model)
                          .value;
    const double ms = vacuum_torque(w2, config.particle, thermal, q, config.model).value;
    return (mb - ms) / inertia;
  };
  auto rk4 = [&](double y, double h, double k1) {
    const double k2 = rate(y + 0.5 * h * k1);
    const double k3 = rate(y + 0.5 * h * k2);
    const double k4 = rate(y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  constexpr double kRelTol = 1e-6;
  Trajectory traj;
  traj.omega1 = w1;
  double t = 0.0;
  double y = 0.0;
  double h = 1e-3 * tau;
  for (double target : t_grid) {
    while (t < target) {
      const bool last = h >= target - t;
      const double step = last ? target - t : h;
      const double k1 = rate(y);
      const double full = rk4(y, step, k1);
      const double mid = rk4(y, 0.5 * step, k1);
      const double two_half = rk4(mid, 0.5 * step, rate(mid));
      const double err = std::abs(two_half - full) / 15.0;
      const double scale = kRelTol * (std::max(std::abs(y), std::abs(two_half)) + 1e-3 * w1);
      if (err <= scale) {
        t = last ? target : t + step;
        y = two_half + (two_half - full) / 15.0;
        const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        // Only adapt from full steps; a clipped final step says little about h.
        if (!last || step >= h) h = step * std::min(5.0, std::max(0.2, grow));
      } else {
        h = step * std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
      }
      if (!(h > 1e-14 * std::max(tau, t)))
        throw ConvergenceError("time step underflow in nonlinear solve", t, t + h);
    }
    traj.samples.push_back({target, y, delta_measure(w1, y)});
  }
  return traj;
}

/// Nonlinear solve on the default grid of the equivalent linear problem.
inline Trajectory solve_nonlinear(const RunConfig& config) {
  config.validate();
  const auto lin = friction_coefficients(config).coeffs;
  const double tau = relaxation_time(moment_of_inertia(config.particle), lin);
  const auto grid = default_time_grid(tau, config.time_samples);
  return solve_nonlinear(config, grid);
}

/// First time delta drops to the threshold, linearly interpolated between
/// samples; empty if it never does.
inline std::optional<double> sync_time(const Trajectory& traj, double threshold) {
  if (traj.samples.empty()) throw std::invalid_argument("sync_time: empty trajectory");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("sync_time: threshold must lie in (0, 1)");
  const auto& s = traj.samples;
  if (s.front().delta <= threshold) return s.front().time;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].delta <= threshold) {
      const double f = (s[i - 1].delta - threshold) / (s[i - 1].delta - s[i].delta);
      return s[i - 1].time + f * (s[i].time - s[i - 1].time);
    }
  }
  return std::nullopt;
}

/// Exact threshold crossing of the linear solution.
inline std::optional<double> sync_time_closed_form(double inertia,
                                                   const FrictionCoefficients& coeffs,
                                                   double threshold) {
  const double total = coeffs.gamma_s + coeffs.gamma_b;
  if (!(total > 0.0)) return std::nullopt;
  const double dinf = coeffs.gamma_s / total;
  if (!(dinf < threshold)) return std::nullopt;
  return inertia / total * std::log((1.0 - dinf) / (threshold - dinf));
}

}  // namespace nanospin
