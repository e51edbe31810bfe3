#pragma once

// Closed-form theory of two inductively coupled series resonators: port
// impedances, reflection, efficiency, coupling regimes, split-mode
// frequencies, optimal terminations and the available-gain bound.
//
// Every output is a dimensionless power ratio; source amplitudes cancel and
// are never represented.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "wpt/errors.hpp"
#include "wpt/numeric.hpp"
#include "wpt/twoport.hpp"
#include "wpt/types.hpp"

namespace wpt {

/// Series R-L-C model of one loop resonator.
template <typename Scalar>
struct ResonatorT {
  Scalar r;  // ohm
  Scalar l;  // henry
  Scalar c;  // farad

  Scalar omega0() const { return Scalar(1) / std::sqrt(l * c); }
  Scalar reactance(Scalar omega) const { return omega * l - Scalar(1) / (omega * c); }
  std::complex<Scalar> series_impedance(Scalar omega) const { return {r, reactance(omega)}; }
};

template <typename Scalar>
void validate(const ResonatorT<Scalar>& res) {
  if (!(res.r > 0) || !(res.l > 0) || !(res.c > 0) || !std::isfinite(res.r) ||
      !std::isfinite(res.l) || !std::isfinite(res.c)) {
    throw InvalidArgument("resonator: r, l, c must be positive and finite");
  }
}

template <typename Scalar>
struct LinkT {
  ResonatorT<Scalar> res1;
  ResonatorT<Scalar> res2;
  Scalar m12;  // henry

  Scalar coupling_coefficient() const { return m12 / std::sqrt(res1.l * res2.l); }
};

template <typename Scalar>
void validate(const LinkT<Scalar>& link) {
  validate(link.res1);
  validate(link.res2);
  if (!(link.m12 >= 0) || !(link.m12 < std::sqrt(link.res1.l * link.res2.l))) {
    throw InvalidArgument("link: mutual inductance must satisfy 0 <= m12 < sqrt(l1*l2)");
  }
}

template <typename Scalar>
LinkT<Scalar> make_link(const ResonatorT<Scalar>& res1, const ResonatorT<Scalar>& res2,
                        Scalar m12) {
  LinkT<Scalar> link{res1, res2, m12};
  validate(link);
  return link;
}

template <typename Scalar>
LinkT<Scalar> make_identical_link(const ResonatorT<Scalar>& res, Scalar m12) {
  return make_link(res, res, m12);
}

template <typename Scalar>
struct TerminationT {
  std::complex<Scalar> zs;
  std::complex<Scalar> zl;
};

enum class Regime { Strong, Critical, Weak };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Strong: return "strong";
    case Regime::Critical: return "critical";
    case Regime::Weak: return "weak";
  }
  return "unknown";
}

template <typename Scalar>
struct CouplingRegimeT {
  Regime tag;
  Scalar margin;  // (omega*m12)^2 - (R + R_L)^2, or its two-sided analogue
};

/// Split-mode pair in hertz. The even mode (in-phase currents) is the upper one.
template <typename Scalar>
struct ModePairT {
  Scalar f_even;
  Scalar f_odd;
};

using Resonator = ResonatorT<double>;
using Link = LinkT<double>;
using Termination = TerminationT<double>;
using CouplingRegime = CouplingRegimeT<double>;
using ModePair = ModePairT<double>;

/// Relative band on (omega*m12)^2 versus (R+R_L)^2 inside which a link is critical.
inline constexpr double kCriticalTolerance = 1e-9;

template <typename Scalar>
bool is_identical(const LinkT<Scalar>& link, Scalar rel_tol = Scalar(1e-12)) {
  auto close = [rel_tol](Scalar a, Scalar b) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
  };
  return close(link.res1.r, link.res2.r) && close(link.res1.l, link.res2.l) &&
         close(link.res1.c, link.res2.c);
}

namespace detail {

template <typename Scalar>
const ResonatorT<Scalar>& require_identical(const LinkT<Scalar>& link, const char* op) {
  if (!is_identical(link)) {
    throw ModelDomainError(std::string(op) + ": closed form requires identical loops");
  }
  return link.res1;
}

}  // namespace detail

/// Loop-averaged equivalent of a nearly identical pair, for seeding searches.
template <typename Scalar>
LinkT<Scalar> symmetrized(const LinkT<Scalar>& link) {
  const ResonatorT<Scalar> avg{(link.res1.r + link.res2.r) / 2, (link.res1.l + link.res2.l) / 2,
                               (link.res1.c + link.res2.c) / 2};
  return {avg, avg, link.m12};
}

// ---------------------------------------------------------------------------
// Generic circuit quantities (any pair of loops, complex terminations)

template <typename Scalar>
std::complex<Scalar> input_impedance(const LinkT<Scalar>& link, std::complex<Scalar> zl,
                                     Scalar omega) {
  const Scalar x = omega * link.m12;
  return link.res1.series_impedance(omega) + x * x / (link.res2.series_impedance(omega) + zl);
}

template <typename Scalar>
std::complex<Scalar> output_impedance(const LinkT<Scalar>& link, std::complex<Scalar> zs,
                                      Scalar omega) {
  const Scalar x = omega * link.m12;
  return link.res2.series_impedance(omega) + x * x / (link.res1.series_impedance(omega) + zs);
}

/// |Gamma_in|^2 with Gamma_in = (Z_in - Z_S*) / (Z_in + Z_S); reduces to
/// (Z_in - Z_S)/(Z_in + Z_S) for real sources.
template <typename Scalar>
Scalar reflection_mag_sq(const LinkT<Scalar>& link, std::complex<Scalar> zs,
                         std::complex<Scalar> zl, Scalar omega) {
  const auto zin = input_impedance(link, zl, omega);
  return std::norm((zin - std::conj(zs)) / (zin + zs));
}

/// Power gain eta' = P_L / P_in.
template <typename Scalar>
Scalar power_gain(const LinkT<Scalar>& link, std::complex<Scalar> zl, Scalar omega) {
  const Scalar x = omega * link.m12;
  const auto zin = input_impedance(link, zl, omega);
  const auto loop2 = link.res2.series_impedance(omega) + zl;
  return x * x * zl.real() / (std::norm(loop2) * zin.real());
}

/// eta = (1 - |Gamma_in|^2) * eta', with the mismatch factor evaluated as
/// 4 Re(Z_in) Re(Z_S) / |Z_in + Z_S|^2 so that tiny efficiencies keep full
/// relative precision.
template <typename Scalar>
Scalar total_efficiency(const LinkT<Scalar>& link, std::complex<Scalar> zs,
                        std::complex<Scalar> zl, Scalar omega) {
  const auto zin = input_impedance(link, zl, omega);
  const Scalar accepted = Scalar(4) * zin.real() * zs.real() / std::norm(zin + zs);
  return accepted * power_gain(link, zl, omega);
}

/// i2 / i1 for a load zl on loop 2.
template <typename Scalar>
std::complex<Scalar> current_ratio(const LinkT<Scalar>& link, Scalar rl, Scalar omega) {
  const std::complex<Scalar> num(0, -omega * link.m12);
  const std::complex<Scalar> den(link.res2.r + rl, link.res2.reactance(omega));
  return num / den;
}

/// Conjugate-matched terminations (Z_in = Z_S*, Z_out = Z_L*) of the bare loops.
template <typename Scalar>
TerminationT<Scalar> optimal_terminations(const LinkT<Scalar>& link, Scalar omega) {
  const Scalar x = omega * link.m12;
  const Scalar r1 = link.res1.r, r2 = link.res2.r;
  return {{std::sqrt(r1 * r1 + (r1 / r2) * x * x), -link.res1.reactance(omega)},
          {std::sqrt(r2 * r2 + (r2 / r1) * x * x), -link.res2.reactance(omega)}};
}

/// Available gain of the bare loops at omega:
///   theta / (1 + sqrt(1 + theta))^2, theta = (omega*m12)^2 / (R1*R2).
/// For identical loops this is [omega*M / (R + sqrt(R^2 + (omega*M)^2))]^2.
template <typename Scalar>
Scalar max_efficiency(const LinkT<Scalar>& link, Scalar omega) {
  const Scalar x = omega * link.m12;
  const Scalar theta = x * x / (link.res1.r * link.res2.r);
  const Scalar den = Scalar(1) + std::sqrt(Scalar(1) + theta);
  return theta / (den * den);
}

/// Two-sided regime test: (omega*M)^2 against (R1 + R_S)(R2 + R_L).
template <typename Scalar>
CouplingRegimeT<Scalar> classify_coupling(const LinkT<Scalar>& link, Scalar rs, Scalar rl,
                                          Scalar omega) {
  const Scalar x = omega * link.m12;
  const Scalar loss = (link.res1.r + rs) * (link.res2.r + rl);
  const Scalar margin = x * x - loss;
  Regime tag = Regime::Critical;
  if (x * x > loss * (1 + kCriticalTolerance)) {
    tag = Regime::Strong;
  } else if (x * x < loss * (1 - kCriticalTolerance)) {
    tag = Regime::Weak;
  }
  return {tag, margin};
}

// ---------------------------------------------------------------------------
// Identical-loop closed forms (R1 = R2 = R, L1 = L2 = L, C1 = C2 = C, real R_S = R_L)

template <typename Scalar>
CouplingRegimeT<Scalar> classify_coupling(const LinkT<Scalar>& link, Scalar rl, Scalar omega) {
  const auto& res = detail::require_identical(link, "classify_coupling");
  const Scalar x = omega * link.m12;
  const Scalar s = res.r + rl;
  const Scalar margin = x * x - s * s;
  Regime tag = Regime::Critical;
  if (x * x > s * s * (1 + kCriticalTolerance)) {
    tag = Regime::Strong;
  } else if (x * x < s * s * (1 - kCriticalTolerance)) {
    tag = Regime::Weak;
  }
  return {tag, margin};
}

template <typename Scalar>
Scalar reflection_closed_form(const LinkT<Scalar>& link, Scalar rl, Scalar omega) {
  const auto& res = detail::require_identical(link, "reflection_closed_form");
  const Scalar r = res.r;
  const Scalar xr = res.reactance(omega);
  const Scalar x = omega * link.m12;
  const Scalar s = r + rl;
  const Scalar num_a = (r - rl) * s - xr * xr + x * x;
  const Scalar den_a = s * s - xr * xr + x * x;
  return (num_a * num_a + 4 * r * r * xr * xr) / (den_a * den_a + 4 * s * s * xr * xr);
}

template <typename Scalar>
Scalar efficiency_closed_form(const LinkT<Scalar>& link, Scalar rl, Scalar omega) {
  const auto& res = detail::require_identical(link, "efficiency_closed_form");
  const Scalar xr = res.reactance(omega);
  const Scalar x = omega * link.m12;
  const Scalar s = res.r + rl;
  const Scalar num = 2 * rl * x;
  const Scalar den_a = s * s - xr * xr + x * x;
  return num * num / (den_a * den_a + 4 * s * s * xr * xr);
}

/// Efficiency at the isolated-loop resonance omega0:
///   [2 R_L (omega0 M) / ((R + R_L)^2 + (omega0 M)^2)]^2.
template <typename Scalar>
Scalar efficiency_at_resonance(const LinkT<Scalar>& link, Scalar rl) {
  const auto& res = detail::require_identical(link, "efficiency_at_resonance");
  const Scalar x = res.omega0() * link.m12;
  const Scalar s = res.r + rl;
  const Scalar q = 2 * rl * x / (s * s + x * x);
  return q * q;
}

/// (|Gamma|^2, eta) at either split mode of a strongly coupled link.
template <typename Scalar>
std::pair<Scalar, Scalar> strong_coupling_constants(Scalar r, Scalar rl) {
  if (!(r >= 0) || !(rl > 0)) throw InvalidArgument("strong_coupling_constants: need r >= 0, rl > 0");
  const Scalar g = r / (r + rl);
  const Scalar e = rl / (r + rl);
  return {g * g, e * e};
}

/// Approximate split sqrt[(omega0 M / L)^2 - ((R + R_L)/L)^2] in rad/s.
template <typename Scalar>
Scalar mode_split_approx(const LinkT<Scalar>& link, Scalar rl) {
  const auto& res = detail::require_identical(link, "mode_split_approx");
  const auto regime = classify_coupling(link, rl, res.omega0());
  if (regime.tag == Regime::Critical) return Scalar(0);
  if (regime.tag == Regime::Weak) {
    throw ModelDomainError("mode_split_approx: weakly coupled link has an imaginary split");
  }
  const Scalar a = res.omega0() * link.m12 / res.l;
  const Scalar b = (res.r + rl) / res.l;
  return std::sqrt(a * a - b * b);
}

/// Roots of (omega L - 1/(omega C))^2 = (omega M)^2 - (R + R_L)^2 on either
/// side of omega0. Weak coupling has no split (empty result); critical
/// coupling returns omega0 twice.
template <typename Scalar>
std::optional<ModePairT<Scalar>> mode_frequencies(const LinkT<Scalar>& link, Scalar rl) {
  validate(link);
  const auto& res = detail::require_identical(link, "mode_frequencies");
  const Scalar w0 = res.omega0();
  const auto regime = classify_coupling(link, rl, w0);
  if (regime.tag == Regime::Weak) return std::nullopt;
  if (regime.tag == Regime::Critical) return ModePairT<Scalar>{hertz_of(w0), hertz_of(w0)};

  const Scalar s2 = (res.r + rl) * (res.r + rl);
  auto coupling_root = [&](Scalar w) {
    const Scalar x = w * link.m12;
    return std::sqrt(std::max(Scalar(0), x * x - s2));
  };
  auto upper = [&](Scalar w) { return res.reactance(w) - coupling_root(w); };
  auto lower = [&](Scalar w) { return res.reactance(w) + coupling_root(w); };

  const Scalar dw = mode_split_approx(link, rl);
  const Scalar span = 1 + 2 * dw / w0 + Scalar(0.5);
  Scalar hi = w0 * span;
  for (int i = 0; i < 64 && upper(hi) <= 0; ++i) hi *= 2;
  Scalar lo = w0 / span;
  for (int i = 0; i < 64 && lower(lo) >= 0; ++i) lo /= 2;

  // Bisect down to floating-point exhaustion; tolerance far below 1e-12 relative.
  const Scalar w_even = numeric::bisect(upper, w0, hi, Scalar(0), 2000);
  const Scalar w_odd = numeric::bisect(lower, lo, w0, Scalar(0), 2000);
  return ModePairT<Scalar>{hertz_of(w_even), hertz_of(w_odd)};
}

// ---------------------------------------------------------------------------
// T-network branches of the coupled loops

template <typename Scalar>
struct LoopBranchesT {
  std::complex<Scalar> z1;
  std::complex<Scalar> z2;
  std::complex<Scalar> z3;
};

/// z1 = R1 + 1/(j w C1) + j w (L1 - M), z2 likewise, z3 = j w M.
template <typename Scalar>
LoopBranchesT<Scalar> coupled_loop_branches(const ResonatorT<Scalar>& res1,
                                            const ResonatorT<Scalar>& res2, Scalar m12,
                                            Scalar omega) {
  if (!(omega > 0)) throw InvalidArgument("coupled_loop_branches: omega must be positive");
  const std::complex<Scalar> j(0, 1);
  auto arm = [&](const ResonatorT<Scalar>& res) {
    return std::complex<Scalar>(res.r, 0) + Scalar(1) / (j * omega * res.c) +
           j * omega * (res.l - m12);
  };
  return {arm(res1), arm(res2), j * omega * m12};
}

template <typename Scalar>
TwoPortAbcd<Scalar> coupled_loop_abcd(const LinkT<Scalar>& link, Scalar omega) {
  const auto br = coupled_loop_branches(link.res1, link.res2, link.m12, omega);
  return tnetwork_abcd(br.z1, br.z2, br.z3);
}

}  // namespace wpt
