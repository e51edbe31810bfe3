#pragma once

#include <complex>
#include <numbers>

namespace wpt {

template <typename Scalar>
using Complex = std::complex<Scalar>;

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kMu0 = 4e-7 * std::numbers::pi;  // H/m
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s

inline constexpr double omega_of(double f_hz) { return 2.0 * kPi * f_hz; }
inline constexpr double hertz_of(double omega) { return omega / (2.0 * kPi); }

}  // namespace wpt
