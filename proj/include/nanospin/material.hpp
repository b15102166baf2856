#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "nanospin/constants.hpp"
#include "nanospin/errors.hpp"

namespace nanospin {

/// Single Lorentz-oscillator permittivity parameters.
struct DielectricParams {
  double eps_inf;
  double omega_L;  // rad/s, longitudinal optical phonon
  double omega_T;  // rad/s, transverse optical phonon
  double gamma;    // rad/s, damping

  /// Silicon carbide (Palik).
  static constexpr DielectricParams silicon_carbide() {
    return {6.7, 1.823e14, 1.492e14, 8.954e11};
  }

  void validate() const {
    if (!(std::isfinite(eps_inf) && std::isfinite(omega_L) && std::isfinite(omega_T) &&
          std::isfinite(gamma)))
      throw ConfigError("dielectric parameters must be finite");
    if (!(omega_T > 0.0)) throw ConfigError("omega_T must be > 0");
    if (!(omega_L > omega_T)) throw ConfigError("omega_L must exceed omega_T");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    if (!(eps_inf >= 1.0)) throw ConfigError("eps_inf must be >= 1");
  }
};

enum class PolarizabilityModel { bare, clausius_mossotti };

inline std::string_view to_string(PolarizabilityModel m) {
  return m == PolarizabilityModel::bare ? "bare" : "clausius_mossotti";
}

inline PolarizabilityModel parse_polarizability_model(std::string_view s) {
  if (s == "bare") return PolarizabilityModel::bare;
  if (s == "clausius_mossotti") return PolarizabilityModel::clausius_mossotti;
  throw ConfigError("polarizability_model must be \"bare\" or \"clausius_mossotti\", got \"" +
                    std::string(s) + "\"");
}

/// A spherical nanoparticle. Volume and mass are derived from the radius.
struct ParticleSpec {
  double radius = 5e-9;           // m
  double mass_density = 3210.0;   // kg/m^3
  double temperature = 300.0;     // K
  PolarizabilityModel polarizability_model = PolarizabilityModel::bare;
  DielectricParams dielectric = DielectricParams::silicon_carbide();

  double volume() const { return 4.0 * constants::pi * radius * radius * radius / 3.0; }
  double mass() const { return mass_density * volume(); }

  void validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be > 0");
    if (!(mass_density > 0.0) || !std::isfinite(mass_density))
      throw ConfigError("mass_density must be > 0");
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
      throw ConfigError("temperature must be >= 0");
    dielectric.validate();
  }
};

/// eps_inf * (1 + (wL^2 - wT^2) / (wT^2 - w^2 - i*gamma*w)). Valid for either sign of omega.
inline std::complex<double> permittivity(double omega, const DielectricParams& p) {
  const std::complex<double> den(p.omega_T * p.omega_T - omega * omega, -p.gamma * omega);
  const double strength = p.omega_L * p.omega_L - p.omega_T * p.omega_T;
  return p.eps_inf * (1.0 + strength / den);
}

/// d(eps)/d(omega), from the same rational expression.
inline std::complex<double> permittivity_derivative(double omega, const DielectricParams& p) {
  const std::complex<double> den(p.omega_T * p.omega_T - omega * omega, -p.gamma * omega);
  const double strength = p.omega_L * p.omega_L - p.omega_T * p.omega_T;
  const std::complex<double> dden(-2.0 * omega, -p.gamma);
  return -p.eps_inf * strength * dden / (den * den);
}

/// Complex polarizability in volume units (m^3); eps0 is folded into the torque prefactors.
inline std::complex<double> polarizability(double omega, const ParticleSpec& particle) {
  const auto eps = permittivity(omega, particle.dielectric);
  const double v = particle.volume();
  if (particle.polarizability_model == PolarizabilityModel::bare) return v * (eps - 1.0);
  return 3.0 * v * (eps - 1.0) / (eps + 2.0);
}

inline double im_polarizability(double omega, const ParticleSpec& particle) {
  return polarizability(omega, particle).imag();
}

/// Analytic d(Im alpha)/d(omega). Im and d/domega commute on the real axis.
inline double d_im_polarizability(double omega, const ParticleSpec& particle) {
  const auto deps = permittivity_derivative(omega, particle.dielectric);
  const double v = particle.volume();
  if (particle.polarizability_model == PolarizabilityModel::bare) return v * deps.imag();
  const auto eps = permittivity(omega, particle.dielectric);
  // d/deps [3V (eps-1)/(eps+2)] = 9V/(eps+2)^2
  return (9.0 * v * deps / ((eps + 2.0) * (eps + 2.0))).imag();
}

/// Frequency where Im alpha peaks: omega_T for the bare model, the Froehlich
/// frequency (Re eps = -2) for Clausius-Mossotti.
inline double polarizability_resonance(const ParticleSpec& particle) {
  const auto& p = particle.dielectric;
  if (particle.polarizability_model == PolarizabilityModel::bare) return p.omega_T;
  const double wl2 = p.omega_L * p.omega_L;
  const double wt2 = p.omega_T * p.omega_T;
  return std::sqrt((p.eps_inf * wl2 + 2.0 * wt2) / (p.eps_inf + 2.0));
}

}  // namespace nanospin
