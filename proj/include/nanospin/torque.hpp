#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "nanospin/constants.hpp"
#include "nanospin/errors.hpp"
#include "nanospin/greens.hpp"
#include "nanospin/material.hpp"
#include "nanospin/quadrature.hpp"

namespace nanospin {

struct ThermalState {
  double T = 300.0;   // particle, K
  double T0 = 300.0;  // vacuum field / environment, K

  void validate() const {
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("temperature must be >= 0");
    if (!(T0 >= 0.0) || !std::isfinite(T0))
      throw ConfigError("environment temperature must be >= 0");
  }
};

struct SpinPair {
  double omega01;  // NP1, rad/s
  double omega02;  // NP2, rad/s
};

/// Linear-response drag coefficients, both >= 0 under the orientation used
/// throughout: vacuum torque opposes the spin, mutual torque pulls NP2 toward NP1.
struct FrictionCoefficients {
  double gamma_s;  // N m s
  double gamma_b;  // N m s
};

enum class OccupationConvention { bose_einstein, literal };
enum class CothArgument { full, half };

inline std::string_view to_string(OccupationConvention c) {
  return c == OccupationConvention::bose_einstein ? "bose_einstein" : "literal";
}
inline std::string_view to_string(CothArgument c) {
  return c == CothArgument::full ? "full" : "half";
}
inline OccupationConvention parse_occupation(std::string_view s) {
  if (s == "bose_einstein") return OccupationConvention::bose_einstein;
  if (s == "literal") return OccupationConvention::literal;
  throw ConfigError("occupation must be \"bose_einstein\" or \"literal\", got \"" +
                    std::string(s) + "\"");
}
inline CothArgument parse_coth_argument(std::string_view s) {
  if (s == "full") return CothArgument::full;
  if (s == "half") return CothArgument::half;
  throw ConfigError("coth_argument must be \"full\" or \"half\", got \"" + std::string(s) +
                    "\"");
}

/// Conventions and calibration multipliers that the torque formulas leave open.
struct TorqueModel {
  OccupationConvention occupation = OccupationConvention::bose_einstein;
  CothArgument coth_argument = CothArgument::full;
  double vacuum_scale = 1.0;  // multiplies hbar/(2 pi c^2)
  double mutual_scale = 1.0;  // multiplies 4 pi hbar
  bool allow_low_spin_direct = false;

  void validate() const {
    if (!(vacuum_scale > 0.0) || !std::isfinite(vacuum_scale))
      throw ConfigError("vacuum_scale must be > 0");
    if (!(mutual_scale > 0.0) || !std::isfinite(mutual_scale))
      throw ConfigError("mutual_scale must be > 0");
  }
};

/// Below this spin (difference) direct evaluation of the torque integrals
/// loses more digits to cancellation than the result has.
inline constexpr double kDirectSpinFloor = 1e6;  // rad/s

/// Minimum distance in particle radii for the point-dipole picture.
inline constexpr double kMinDistanceInRadii = 10.0;

struct TorqueEstimate {
  double value = 0.0;
  QuadratureResult quad;
};

// ---------------------------------------------------------------------------
// Thermal factors

/// d(x)/d(omega) for x = hbar omega / (k_B T), or half of it.
inline double thermal_rate(double T, CothArgument arg = CothArgument::full) {
  const double rate = constants::hbar / (constants::k_B * T);
  return arg == CothArgument::full ? rate : 0.5 * rate;
}

/// a_T(omega) = coth(hbar omega / k_B T). At T = 0 this is sign(omega).
inline double coth_factor(double omega, double T, CothArgument arg = CothArgument::full) {
  if (T == 0.0) return omega > 0.0 ? 1.0 : (omega < 0.0 ? -1.0 : 0.0);
  if (omega == 0.0) throw PoleError("coth factor has a pole at omega = 0");
  const double x = omega * thermal_rate(T, arg);
  if (std::abs(x) < 1e-6) return 1.0 / x + x / 3.0;
  return 1.0 / std::tanh(x);
}

inline double coth_factor_derivative(double omega, double T,
                                     CothArgument arg = CothArgument::full) {
  if (T == 0.0) return 0.0;
  if (omega == 0.0) throw PoleError("coth factor has a pole at omega = 0");
  const double rate = thermal_rate(T, arg);
  const double x = omega * rate;
  if (std::abs(x) < 1e-6) return -rate * (1.0 / (x * x) - 1.0 / 3.0);
  const double s = std::sinh(x);
  return -rate / (s * s);
}

/// Photon occupation. Default is Bose-Einstein 1/(e^x - 1); literal_sign
/// evaluates 1/(e^{-x} - 1) = -(1 + n_BE).
inline double occupation(double omega, double T, bool literal_sign = false) {
  if (!(T > 0.0)) throw std::invalid_argument("occupation requires T > 0");
  if (omega == 0.0) throw PoleError("occupation has a pole at omega = 0");
  const double x = omega * thermal_rate(T);
  return literal_sign ? 1.0 / std::expm1(-x) : 1.0 / std::expm1(x);
}

inline double occupation_derivative(double omega, double T, bool literal_sign = false) {
  if (!(T > 0.0)) throw std::invalid_argument("occupation requires T > 0");
  if (omega == 0.0) throw PoleError("occupation has a pole at omega = 0");
  const double rate = thermal_rate(T);
  const double s = std::sinh(0.5 * omega * rate);
  const double dn = -rate / (4.0 * s * s);
  return literal_sign ? -dn : dn;
}

namespace detail {

// Im alpha(w) * a_T(w); the omega -> 0 singularity is removable.
inline double alpha_coth(double w, double T, const ParticleSpec& p, CothArgument arg) {
  if (T == 0.0) return std::abs(im_polarizability(w, p));
  if (w == 0.0) return d_im_polarizability(0.0, p) / thermal_rate(T, arg);
  return im_polarizability(w, p) * coth_factor(w, T, arg);
}

// Im alpha(w) * n_T(w); removable at 0 as well.
inline double alpha_occupation(double w, double T, const ParticleSpec& p, bool literal) {
  if (w == 0.0) {
    const double limit = d_im_polarizability(0.0, p) / thermal_rate(T);
    return literal ? -limit : limit;
  }
  return im_polarizability(w, p) * occupation(w, T, literal);
}

inline double default_cutoff(const ParticleSpec& p, std::initializer_list<double> temps,
                             std::initializer_list<double> spins) {
  double t_max = 0.0;
  for (double t : temps) t_max = std::max(t_max, t);
  double spin_max = 0.0;
  for (double s : spins) spin_max = std::max(spin_max, std::abs(s));
  const double thermal = t_max > 0.0 ? 10.0 * constants::k_B * t_max / constants::hbar : 0.0;
  return std::max(thermal, 5.0 * p.dielectric.omega_L) + 2.0 * spin_max;
}

/// Fills in the cutoff and adds panel edges at the material resonances, the
/// thermal frequencies and the spin-shifted resonances.
inline QuadratureConfig resolve_quadrature(const QuadratureConfig& quad, const ParticleSpec& p,
                                           std::initializer_list<double> temps,
                                           std::initializer_list<double> spins) {
  quad.validate();
  QuadratureConfig out = quad;
  if (!(out.omega_max > 0.0)) out.omega_max = default_cutoff(p, temps, spins);

  const auto& d = p.dielectric;
  const double res = polarizability_resonance(p);
  std::vector<double> pts = quad.breakpoints;
  for (double w : {d.omega_T, d.omega_L, res, res - 5.0 * d.gamma, res + 5.0 * d.gamma})
    pts.push_back(w);
  for (double t : temps)
    if (t > 0.0) pts.push_back(constants::k_B * t / constants::hbar);
  for (double s : spins) {
    const double a = std::abs(s);
    if (a == 0.0) continue;
    for (double w : {a, res - a, res + a, d.omega_L - a, d.omega_L + a}) pts.push_back(w);
  }
  std::vector<double> kept;
  std::sort(pts.begin(), pts.end());
  for (double w : pts) {
    if (!(w > 0.0 && w < out.omega_max)) continue;
    if (!kept.empty() && w - kept.back() <= 1e-9 * w) continue;
    kept.push_back(w);
  }
  out.breakpoints = std::move(kept);
  return out;
}

inline void require_direct_regime(double spin_scale, const TorqueModel& model,
                                  const char* what) {
  if (spin_scale != 0.0 && spin_scale < kDirectSpinFloor && !model.allow_low_spin_direct)
    throw RegimeError(std::string(what) +
                      ": direct evaluation below 1e6 rad/s is dominated by cancellation; use "
                      "the linearized coefficients or set allow_low_spin_direct");
}

inline void require_point_dipole(double d, const ParticleSpec& p) {
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("distance must be > 0");
  if (d < kMinDistanceInRadii * p.radius)
    throw DistanceError("distance " + std::to_string(d) + " m is below 10 particle radii (" +
                        std::to_string(kMinDistanceInRadii * p.radius) +
                        " m); point-dipole approximation not valid");
}

// abs_tol is given in result units; the raw integral is pref times smaller.
inline QuadratureConfig scaled_abs_tol(QuadratureConfig q, double pref) {
  q.abs_tol /= pref;
  return q;
}

inline double vacuum_prefactor(const TorqueModel& m) {
  return m.vacuum_scale * constants::hbar / (2.0 * constants::pi * constants::c * constants::c);
}
inline double mutual_prefactor(const TorqueModel& m) {
  return m.mutual_scale * 4.0 * constants::pi * constants::hbar;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Torques

/// Frictional torque on a particle spinning at omega0 in the vacuum field.
/// Positive values oppose the rotation (so the sign follows omega0).
inline TorqueEstimate vacuum_torque(double omega0, const ParticleSpec& particle,
                                    const ThermalState& thermal, const QuadratureConfig& quad,
                                    const TorqueModel& model = {}) {
  particle.validate();
  thermal.validate();
  model.validate();
  if (!std::isfinite(omega0)) throw ConfigError("spin must be finite");
  detail::require_direct_regime(std::abs(omega0), model, "vacuum_torque");
  const auto q = detail::resolve_quadrature(quad, particle, {thermal.T, thermal.T0}, {omega0});
  const auto arg = model.coth_argument;

  auto kernel = [&](double w) {
    const double a_env = coth_factor(w, thermal.T0, arg);
    auto term = [&](double x) {
      return detail::alpha_coth(x, thermal.T, particle, arg) -
             a_env * im_polarizability(x, particle);
    };
    return w * w * im_g_self_transverse_sum(w) * (term(w + omega0) - term(w - omega0));
  };
  const double pref = detail::vacuum_prefactor(model);
  TorqueEstimate out;
  out.quad = integrate(kernel, detail::scaled_abs_tol(q, pref));
  out.value = -pref * out.quad.value;
  out.quad.value = out.value;
  out.quad.error *= pref;
  return out;
}

/// Non-contact torque exerted on NP2 at distance d. Positive values drive NP2
/// toward NP1's spin; exactly antisymmetric under exchanging the spins.
inline TorqueEstimate mutual_torque(const SpinPair& spins, double d, const ParticleSpec& particle,
                                    double T, const QuadratureConfig& quad,
                                    const TorqueModel& model = {}) {
  particle.validate();
  model.validate();
  detail::require_point_dipole(d, particle);
  if (!(T > 0.0)) throw ConfigError("mutual torque requires T > 0");
  const double a = spins.omega01;
  const double b = spins.omega02;
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("spins must be finite");
  detail::require_direct_regime(std::abs(a - b), model, "mutual_torque");
  const auto q = detail::resolve_quadrature(quad, particle, {T}, {a, b});
  const bool literal = model.occupation == OccupationConvention::literal;

  auto kernel = [&](double w) {
    auto A = [&](double x) { return detail::alpha_occupation(x, T, particle, literal); };
    auto S = [&](double x) { return im_polarizability(x, particle); };
    const double first = (A(w - b) - A(w + b)) * (S(w + a) + S(w - a));
    const double second = (A(w - a) - A(w + a)) * (S(w + b) + S(w - b));
    return field_abs2_transverse_sum(d, w) * (first - second);
  };
  const double pref = detail::mutual_prefactor(model);
  TorqueEstimate out;
  out.quad = integrate(kernel, detail::scaled_abs_tol(q, pref));
  out.value = -pref * out.quad.value;
  out.quad.value = out.value;
  out.quad.error *= pref;
  return out;
}

// ---------------------------------------------------------------------------
// Linear response
//
// For spins of 1e4 rad/s the shifted frequencies w +- w0 differ from w by
// about one part in 1e10, so the torques are evaluated from the first-order
// expansion of their brackets in the spins instead.

/// dM_S/domega0 at omega0 = 0.
inline TorqueEstimate gamma_s(const ParticleSpec& particle, const ThermalState& thermal,
                              const QuadratureConfig& quad, const TorqueModel& model = {}) {
  particle.validate();
  thermal.validate();
  model.validate();
  if (!(thermal.T > 0.0 && thermal.T0 > 0.0))
    throw ConfigError("gamma_s requires T > 0 and T0 > 0");
  const auto q = detail::resolve_quadrature(quad, particle, {thermal.T, thermal.T0}, {});
  const auto arg = model.coth_argument;
  const bool equal_temps = thermal.T == thermal.T0;

  // bracket -> 2 omega0 [u' - a_T0 v'] with u = Im alpha * a_T, v = Im alpha;
  // for T = T0 this is 2 omega0 Im alpha * a_T'.
  auto kernel = [&](double w) {
    const double v = im_polarizability(w, particle);
    double k;
    if (equal_temps) {
      k = v * coth_factor_derivative(w, thermal.T, arg);
    } else {
      const double dv = d_im_polarizability(w, particle);
      const double du = dv * coth_factor(w, thermal.T, arg) +
                        v * coth_factor_derivative(w, thermal.T, arg);
      k = du - coth_factor(w, thermal.T0, arg) * dv;
    }
    return 2.0 * w * w * im_g_self_transverse_sum(w) * k;
  };
  const double pref = detail::vacuum_prefactor(model);
  TorqueEstimate out;
  out.quad = integrate(kernel, detail::scaled_abs_tol(q, pref));
  out.value = -pref * out.quad.value;
  out.quad.value = out.value;
  out.quad.error *= pref;
  return out;
}

/// dM_B/d(omega01 - omega02) at zero spins.
inline TorqueEstimate gamma_b(double d, const ParticleSpec& particle, double T,
                              const QuadratureConfig& quad, const TorqueModel& model = {}) {
  particle.validate();
  model.validate();
  detail::require_point_dipole(d, particle);
  if (!(T > 0.0)) throw ConfigError("gamma_b requires T > 0");
  const auto q = detail::resolve_quadrature(quad, particle, {T}, {});
  const bool literal = model.occupation == OccupationConvention::literal;

  // braces -> 4 (omega01 - omega02) w'(omega) s(omega), w = Im alpha * n_T, s = Im alpha
  auto kernel = [&](double w) {
    const double s = im_polarizability(w, particle);
    const double dw = d_im_polarizability(w, particle) * occupation(w, T, literal) +
                      s * occupation_derivative(w, T, literal);
    return 4.0 * field_abs2_transverse_sum(d, w) * dw * s;
  };
  const double pref = detail::mutual_prefactor(model);
  TorqueEstimate out;
  out.quad = integrate(kernel, detail::scaled_abs_tol(q, pref));
  out.value = -pref * out.quad.value;
  out.quad.value = out.value;
  out.quad.error *= pref;
  return out;
}

}  // namespace nanospin
