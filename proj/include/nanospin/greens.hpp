#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "nanospin/constants.hpp"
#include "nanospin/errors.hpp"

namespace nanospin {

/// Particles sit on the z axis, NP1 at the origin and NP2 at distance.
struct Geometry {
  double distance;  // m
};

/// Real and imaginary parts of a 3x3 dyadic, kept separate so that the
/// evaluation also works for multiprecision scalars without std::complex.
template <class Real>
struct Dyadic {
  std::array<std::array<Real, 3>, 3> re{};
  std::array<std::array<Real, 3>, 3> im{};
};

/// Free-space dyadic Green tensor between two points separated by R:
///
///   G_ij = e^{ikR} / (R^3 k^2) [ (k^2R^2 + ikR - 1) delta_ij - (k^2R^2 + 3ikR - 3) R_i R_j / R^2 ]
///
/// Generic in the scalar type; the double instantiation is used for cross
/// checks, wider types for resolving the coincident-point limit.
template <class Real>
Dyadic<Real> dyadic_green(const std::array<Real, 3>& sep, const Real& k) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Real r2 = sep[0] * sep[0] + sep[1] * sep[1] + sep[2] * sep[2];
  const Real r = sqrt(r2);
  const Real x = k * r;
  const Real pref = Real(1) / (r2 * r * k * k);
  const Real c = cos(x) * pref;
  const Real s = sin(x) * pref;
  // (a + ib) * (c + is)
  const Real diag_re = x * x - Real(1);
  const Real diag_im = x;
  const Real dir_re = x * x - Real(3);
  const Real dir_im = Real(3) * x;

  Dyadic<Real> g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Real rr = sep[i] * sep[j] / r2;
      const Real a = (i == j ? diag_re : Real(0)) - dir_re * rr;
      const Real b = (i == j ? diag_im : Real(0)) - dir_im * rr;
      g.re[i][j] = a * c - b * s;
      g.im[i][j] = a * s + b * c;
    }
  }
  return g;
}

inline double wavenumber(double omega) { return omega / constants::c; }

namespace detail {
inline void require_positive_frequency(double d, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("Green tensor requires omega > 0");
  if (!(d > 0.0)) throw std::invalid_argument("Green tensor requires distance > 0");
}
}  // namespace detail

/// G_xx = G_yy on the z axis: e^{ikd}(k^2d^2 + ikd - 1)/(d^3 k^2).
inline std::complex<double> g_transverse(double d, double omega) {
  detail::require_positive_frequency(d, omega);
  const double k = wavenumber(omega);
  const double x = k * d;
  return std::polar(1.0, x) * std::complex<double>(x * x - 1.0, x) / (d * d * d * k * k);
}

/// G_zz on the z axis: 2 e^{ikd}(1 - ikd)/(d^3 k^2). Not used by the torques.
inline std::complex<double> g_longitudinal(double d, double omega) {
  detail::require_positive_frequency(d, omega);
  const double k = wavenumber(omega);
  const double x = k * d;
  return 2.0 * std::polar(1.0, x) * std::complex<double>(1.0, -x) / (d * d * d * k * k);
}

/// |G_xx|^2 + |G_yy|^2 = 2 (x^4 - x^2 + 1) / (k^4 d^6), x = kd. No exponentials.
inline double abs2_transverse_sum(double d, double omega) {
  detail::require_positive_frequency(d, omega);
  const double x = wavenumber(omega) * d;
  const double x2 = x * x;
  return 2.0 * (x2 * x2 - x2 + 1.0) / (x2 * x2 * d * d);
}

/// k^4 (|G_xx|^2 + |G_yy|^2) = 2 (x^4 - x^2 + 1) / d^6.
///
/// The field radiated by a dipole is mu0 omega^2 G p = (k^2/eps0) G p, so the
/// dipole-dipole coupling squared carries k^4 |G|^2. Without it the mutual
/// torque integrand grows like omega^-3 at low frequency.
inline double field_abs2_transverse_sum(double d, double omega) {
  detail::require_positive_frequency(d, omega);
  const double x = wavenumber(omega) * d;
  const double x2 = x * x;
  const double d2 = d * d;
  return 2.0 * (x2 * x2 - x2 + 1.0) / (d2 * d2 * d2);
}

/// Im[G_xx + G_yy] at coincident points: the R -> 0 limit of Im G_xx is 2k/3.
inline double im_g_self_transverse_sum(double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("self Green term requires omega > 0");
  return 4.0 * omega / (3.0 * constants::c);
}

}  // namespace nanospin
