#pragma once

// Single-frequency two-port network algebra: ABCD (transmission) matrices,
// cascades, and conversions to impedance and scattering form. All matrices are
// values at one angular frequency; the caller is responsible for keeping the
// operands of a cascade at the same frequency.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "wpt/errors.hpp"

namespace wpt {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
struct TwoPortAbcd {
  using Complex = std::complex<Scalar>;
  Matrix2c<Scalar> m;

  static TwoPortAbcd identity() { return {Matrix2c<Scalar>::Identity()}; }

  Complex a() const { return m(0, 0); }
  Complex b() const { return m(0, 1); }
  Complex c() const { return m(1, 0); }
  Complex d() const { return m(1, 1); }
  Complex determinant() const { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }
};

template <typename Scalar>
struct ImpedanceMatrix {
  using Complex = std::complex<Scalar>;
  Matrix2c<Scalar> z;

  Complex z11() const { return z(0, 0); }
  Complex z12() const { return z(0, 1); }
  Complex z21() const { return z(1, 0); }
  Complex z22() const { return z(1, 1); }
};

template <typename Scalar>
struct ScatterMatrix {
  using Complex = std::complex<Scalar>;
  Matrix2c<Scalar> s;
  Scalar z_ref;

  Complex s11() const { return s(0, 0); }
  Complex s12() const { return s(0, 1); }
  Complex s21() const { return s(1, 0); }
  Complex s22() const { return s(1, 1); }
};

using Abcd = TwoPortAbcd<double>;
using Zmatrix = ImpedanceMatrix<double>;
using Smatrix = ScatterMatrix<double>;

namespace detail {

template <typename Scalar>
std::complex<Scalar> checked_div(const std::complex<Scalar>& num,
                                 const std::complex<Scalar>& den, const char* what) {
  if (den == std::complex<Scalar>(0)) {
    throw SingularConversion(std::string(what) + ": zero denominator");
  }
  const std::complex<Scalar> q = num / den;
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag())) {
    throw SingularConversion(std::string(what) + ": non-finite result");
  }
  return q;
}

}  // namespace detail

template <typename Scalar>
TwoPortAbcd<Scalar> make_abcd(std::complex<Scalar> a, std::complex<Scalar> b,
                              std::complex<Scalar> c, std::complex<Scalar> d) {
  TwoPortAbcd<Scalar> out;
  out.m << a, b, c, d;
  return out;
}

/// Lossless transmission line of characteristic impedance z0 and electrical
/// length beta*length.
template <typename Scalar>
TwoPortAbcd<Scalar> tline_abcd(Scalar z0, Scalar beta, Scalar length) {
  if (!(z0 > 0)) throw InvalidArgument("tline_abcd: z0 must be positive");
  if (!(length >= 0)) throw InvalidArgument("tline_abcd: length must be non-negative");
  using C = std::complex<Scalar>;
  const Scalar bl = beta * length;
  const Scalar cs = std::cos(bl);
  const Scalar sn = std::sin(bl);
  return make_abcd<Scalar>(C(cs, 0), C(0, z0 * sn), C(0, sn / z0), C(cs, 0));
}

/// T-network with series arms z1, z2 and shunt leg z3. A vanishing shunt leg
/// (no coupling) has no T representation and is rejected.
template <typename Scalar>
TwoPortAbcd<Scalar> tnetwork_abcd(std::complex<Scalar> z1, std::complex<Scalar> z2,
                                  std::complex<Scalar> z3) {
  if (z3 == std::complex<Scalar>(0)) {
    throw SingularNetwork("tnetwork_abcd: shunt impedance z3 is zero");
  }
  const std::complex<Scalar> one(1);
  return make_abcd<Scalar>(one + z1 / z3, z1 + z2 + z1 * z2 / z3, one / z3, one + z2 / z3);
}

template <typename Scalar>
TwoPortAbcd<Scalar> series_abcd(std::complex<Scalar> z) {
  return make_abcd<Scalar>(1, z, 0, 1);
}

template <typename Scalar>
TwoPortAbcd<Scalar> shunt_abcd(std::complex<Scalar> y) {
  return make_abcd<Scalar>(1, 0, y, 1);
}

template <typename Scalar>
TwoPortAbcd<Scalar> cascade(const TwoPortAbcd<Scalar>& left, const TwoPortAbcd<Scalar>& right) {
  return {left.m * right.m};
}

template <typename Scalar, typename... Rest>
TwoPortAbcd<Scalar> cascade(const TwoPortAbcd<Scalar>& first, const TwoPortAbcd<Scalar>& second,
                            const Rest&... rest) {
  return cascade(cascade(first, second), rest...);
}

/// The same network seen with its ports swapped.
template <typename Scalar>
TwoPortAbcd<Scalar> reversed(const TwoPortAbcd<Scalar>& n) {
  const auto det = n.determinant();
  if (det == std::complex<Scalar>(0)) throw SingularConversion("reversed: zero determinant");
  return make_abcd<Scalar>(n.d() / det, n.b() / det, n.c() / det, n.a() / det);
}

template <typename Scalar>
ImpedanceMatrix<Scalar> abcd_to_z(const TwoPortAbcd<Scalar>& n) {
  using detail::checked_div;
  const auto c = n.c();
  ImpedanceMatrix<Scalar> out;
  out.z << checked_div(n.a(), c, "abcd_to_z"), checked_div(n.determinant(), c, "abcd_to_z"),
      checked_div(std::complex<Scalar>(1), c, "abcd_to_z"), checked_div(n.d(), c, "abcd_to_z");
  return out;
}

template <typename Scalar>
TwoPortAbcd<Scalar> z_to_abcd(const ImpedanceMatrix<Scalar>& zm) {
  using detail::checked_div;
  const auto z21 = zm.z21();
  const auto det = zm.z11() * zm.z22() - zm.z12() * zm.z21();
  return make_abcd<Scalar>(checked_div(zm.z11(), z21, "z_to_abcd"),
                           checked_div(det, z21, "z_to_abcd"),
                           checked_div(std::complex<Scalar>(1), z21, "z_to_abcd"),
                           checked_div(zm.z22(), z21, "z_to_abcd"));
}

/// Scattering parameters with the same real reference impedance on both ports.
template <typename Scalar>
ScatterMatrix<Scalar> abcd_to_s(const TwoPortAbcd<Scalar>& n, Scalar z_ref) {
  if (!(z_ref > 0)) throw InvalidArgument("abcd_to_s: z_ref must be positive");
  using detail::checked_div;
  const auto a = n.a(), b = n.b(), c = n.c(), d = n.d();
  const auto bz = b / z_ref;
  const auto cz = c * z_ref;
  const auto den = a + bz + cz + d;
  ScatterMatrix<Scalar> out;
  out.z_ref = z_ref;
  out.s << checked_div(a + bz - cz - d, den, "abcd_to_s"),
      checked_div(Scalar(2) * n.determinant(), den, "abcd_to_s"),
      checked_div(std::complex<Scalar>(2), den, "abcd_to_s"),
      checked_div(-a + bz - cz + d, den, "abcd_to_s");
  return out;
}

template <typename Scalar>
TwoPortAbcd<Scalar> s_to_abcd(const ScatterMatrix<Scalar>& sm) {
  using detail::checked_div;
  const std::complex<Scalar> one(1);
  const auto s11 = sm.s11(), s12 = sm.s12(), s21 = sm.s21(), s22 = sm.s22();
  const auto p = s12 * s21;
  const auto den = Scalar(2) * s21;
  return make_abcd<Scalar>(checked_div((one + s11) * (one - s22) + p, den, "s_to_abcd"),
                           sm.z_ref * checked_div((one + s11) * (one + s22) - p, den, "s_to_abcd"),
                           checked_div((one - s11) * (one - s22) - p, den, "s_to_abcd") / sm.z_ref,
                           checked_div((one - s11) * (one + s22) + p, den, "s_to_abcd"));
}

/// Impedance at port 1 when port 2 is terminated in z_load.
template <typename Scalar>
std::complex<Scalar> input_impedance_of(const TwoPortAbcd<Scalar>& n, std::complex<Scalar> z_load) {
  return detail::checked_div(n.a() * z_load + n.b(), n.c() * z_load + n.d(), "input_impedance_of");
}

/// Impedance at port 2 when port 1 is terminated in z_source.
template <typename Scalar>
std::complex<Scalar> output_impedance_of(const TwoPortAbcd<Scalar>& n,
                                         std::complex<Scalar> z_source) {
  return detail::checked_div(n.d() * z_source + n.b(), n.c() * z_source + n.a(),
                             "output_impedance_of");
}

/// P_load / P_available for arbitrary passive terminations.
template <typename Scalar>
Scalar transducer_gain(const TwoPortAbcd<Scalar>& n, std::complex<Scalar> z_source,
                       std::complex<Scalar> z_load) {
  const auto den = n.a() * z_load + n.b() + n.c() * z_source * z_load + n.d() * z_source;
  if (den == std::complex<Scalar>(0)) throw SingularConversion("transducer_gain: zero denominator");
  return Scalar(4) * z_source.real() * z_load.real() / std::norm(den);
}

template <typename Scalar>
Scalar transducer_gain(const ImpedanceMatrix<Scalar>& zm, std::complex<Scalar> z_source,
                       std::complex<Scalar> z_load) {
  const auto den = (zm.z11() + z_source) * (zm.z22() + z_load) - zm.z12() * zm.z21();
  if (den == std::complex<Scalar>(0)) throw SingularConversion("transducer_gain: zero denominator");
  return Scalar(4) * z_source.real() * z_load.real() * std::norm(zm.z21()) / std::norm(den);
}

template <typename Scalar>
struct ConjugateMatch {
  std::complex<Scalar> z_source;
  std::complex<Scalar> z_load;
};

/// Closed-form terminations with Z_in = Z_S* and Z_out = Z_L* at once.
///
/// With p = z12*z21 and r_ij = Re(z_ij):
///   R_S = sqrt((2 r11 r22 - Re p)^2 - |p|^2) / (2 r22),  X_S = -x11 + Im p / (2 r22)
/// and the mirrored expressions for the load. The radicand is positive only
/// for unconditionally stable (passive, lossy) networks.
template <typename Scalar>
ConjugateMatch<Scalar> simultaneous_conjugate_match(const ImpedanceMatrix<Scalar>& zm) {
  const Scalar r11 = zm.z11().real();
  const Scalar r22 = zm.z22().real();
  if (!(r11 > 0) || !(r22 > 0)) {
    throw NoSolution("simultaneous_conjugate_match: port resistances must be positive");
  }
  const auto p = zm.z12() * zm.z21();
  const Scalar t = 2 * r11 * r22 - p.real();
  const Scalar radicand = t * t - std::norm(p);
  if (!(radicand > 0) || !(t > 0)) {
    throw NoSolution("simultaneous_conjugate_match: network is not unconditionally stable");
  }
  const Scalar root = std::sqrt(radicand);
  return {std::complex<Scalar>(root / (2 * r22), -zm.z11().imag() + p.imag() / (2 * r22)),
          std::complex<Scalar>(root / (2 * r11), -zm.z22().imag() + p.imag() / (2 * r11))};
}

/// Maximum available gain: the transducer gain under simultaneous conjugate match.
template <typename Scalar>
Scalar available_gain(const ImpedanceMatrix<Scalar>& zm) {
  const auto match = simultaneous_conjugate_match(zm);
  return transducer_gain(zm, match.z_source, match.z_load);
}

}  // namespace wpt
