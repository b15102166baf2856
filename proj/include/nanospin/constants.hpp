#pragma once

namespace nanospin {

// CODATA 2018, SI units. Fixed; not configurable.
struct PhysicalConstants {
  double c;      // m/s
  double hbar;   // J s
  double k_B;    // J/K
  double eps0;   // F/m
};

inline constexpr PhysicalConstants kCodata2018{
    299792458.0,
    1.054571817e-34,
    1.380649e-23,
    8.8541878128e-12,
};

namespace constants {
inline constexpr double c = kCodata2018.c;
inline constexpr double hbar = kCodata2018.hbar;
inline constexpr double k_B = kCodata2018.k_B;
inline constexpr double eps0 = kCodata2018.eps0;
inline constexpr double pi = 3.141592653589793238462643383279502884;
}  // namespace constants

}  // namespace nanospin
