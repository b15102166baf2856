#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "nanospin/errors.hpp"

namespace nanospin {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;        // same units as the integral
  int max_subdivisions = 4000;
  double omega_max = 0.0;      // rad/s; 0 lets the torque routines pick a cutoff
  std::vector<double> breakpoints;  // rad/s, ascending

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3))
      throw ConfigError("rel_tol must lie in (0, 1e-3]");
    if (!(abs_tol >= 0.0)) throw ConfigError("abs_tol must be >= 0");
    if (max_subdivisions < 1) throw ConfigError("max_subdivisions must be >= 1");
    if (!(omega_max >= 0.0) || !std::isfinite(omega_max))
      throw ConfigError("omega_max must be finite and >= 0");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
      throw ConfigError("breakpoints must be sorted ascending");
    if (omega_max > 0.0 && !breakpoints.empty() && !(omega_max > breakpoints.back()))
      throw ConfigError("omega_max must exceed the largest breakpoint");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;      // estimated absolute error
  double peak = 0.0;       // largest |kernel| seen at any node
  long evaluations = 0;
  int panels = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478180, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_21(F& f, double lo, double hi, double& peak) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  peak = std::max(peak, std::abs(fc));
  double kronrod = kKronrodWeights[10] * fc;
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    peak = std::max(peak, std::max(std::abs(f1), std::abs(f2)));
    kronrod += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G10/K21) over consecutive panels whose
/// edges are given. The panel with the largest error estimate is bisected
/// until the summed estimate meets max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate_panels(F&& f, std::span<const double> edges, double rel_tol,
                                  double abs_tol, int max_subdivisions) {
  QuadratureResult out;
  if (edges.size() < 2) return out;

  std::priority_queue<detail::Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    auto p = detail::gauss_kronrod_21(f, edges[i], edges[i + 1], out.peak);
    out.evaluations += 21;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  int splits = 0;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (!std::isfinite(total) || !std::isfinite(total_err)) {
      const auto& w = heap.top();
      std::ostringstream msg;
      msg << "quadrature produced a non-finite value near panel [" << w.lo << ", " << w.hi
          << "]";
      throw ConvergenceError(msg.str(), w.lo, w.hi);
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (splits >= max_subdivisions || !(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 1e-13 * std::abs(mid)) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "quadrature did not converge after " << splits << " subdivisions: error "
          << total_err << " vs result " << total << "; worst panel [" << worst.lo << ", "
          << worst.hi << "] with error " << worst.error;
      throw ConvergenceError(msg.str(), worst.lo, worst.hi);
    }
    heap.pop();
    auto left = detail::gauss_kronrod_21(f, worst.lo, mid, out.peak);
    auto right = detail::gauss_kronrod_21(f, mid, worst.hi, out.peak);
    out.evaluations += 42;
    ++splits;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum in frequency order to get a deterministic, drift-free total.
  std::vector<detail::Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo; });
  out.value = 0.0;
  out.error = 0.0;
  for (const auto& p : panels) {
    out.value += p.value;
    out.error += p.error;
  }
  out.panels = static_cast<int>(panels.size());
  return out;
}

/// Integral of f over [lo, hi], split at the configured breakpoints inside it.
template <class F>
QuadratureResult integrate_interval(F&& f, double lo, double hi, const QuadratureConfig& quad) {
  if (!(hi > lo)) throw std::invalid_argument("integrate_interval requires hi > lo");
  std::vector<double> edges{lo};
  for (double b : quad.breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  return integrate_panels(f, edges, quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
}

/// Integral of a frequency kernel over (0, infinity), truncated at
/// quad.omega_max. The truncation is accepted only when the kernel at the
/// cutoff is below 1e-12 of its peak.
template <class F>
QuadratureResult integrate(F&& kernel, const QuadratureConfig& quad) {
  quad.validate();
  if (!(quad.omega_max > 0.0)) throw ConfigError("integrate requires omega_max > 0");
  auto result = integrate_interval(kernel, 0.0, quad.omega_max, quad);
  const double at_cutoff = std::abs(kernel(quad.omega_max));
  if (!(at_cutoff <= 1e-12 * result.peak)) {
    std::ostringstream msg;
    msg << "integration tail not negligible: |kernel(" << quad.omega_max << ")| = " << at_cutoff
        << " exceeds 1e-12 of peak " << result.peak << "; raise omega_max";
    throw TailError(msg.str());
  }
  return result;
}

}  // namespace nanospin
