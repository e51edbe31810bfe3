#include "wpt/matching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wpt/errors.hpp"
#include "wpt/numeric.hpp"

namespace wpt {

const char* to_string(LOrientation o) {
  switch (o) {
    case LOrientation::SeriesAtReference: return "series_at_reference";
    case LOrientation::ShuntAtReference: return "shunt_at_reference";
  }
  return "unknown";
}

void validate(const LSection& ls) {
  if (!(ls.c_series > 0) || !(ls.c_shunt > 0) || !std::isfinite(ls.c_series) ||
      !std::isfinite(ls.c_shunt)) {
    throw InvalidArgument("l-section: capacitances must be positive and finite");
  }
}

Abcd lsection_abcd(const LSection& ls, double omega) {
  validate(ls);
  const cplx j(0, 1);
  const Abcd series = series_abcd<double>(1.0 / (j * omega * ls.c_series));
  const Abcd shunt = shunt_abcd<double>(j * omega * ls.c_shunt);
  return ls.orientation == LOrientation::SeriesAtReference ? cascade(series, shunt)
                                                           : cascade(shunt, series);
}

cplx presented_impedance(const LSection& ls, double z_ref, double omega) {
  return output_impedance_of(lsection_abcd(ls, omega), cplx(z_ref, 0));
}

namespace {

std::string describe(cplx z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "j ohm";
  return os.str();
}

}  // namespace

LSection synthesize_lsection(cplx z_present, double z_ref, double omega, LOrientation orientation) {
  if (!(z_ref > 0) || !(omega > 0)) {
    throw InvalidArgument("synthesize_lsection: z_ref and omega must be positive");
  }
  if (!(z_present.real() > 0)) {
    throw UnmatchableError("synthesize_lsection: target " + describe(z_present) +
                           " has no positive resistance");
  }
  LSection out;
  out.orientation = orientation;
  if (orientation == LOrientation::SeriesAtReference) {
    // Shunt C across the loop port, series C in front of z_ref: the admittance
    // at the loop port is j w Cp + 1/(z_ref - j Xs).
    const cplx y = 1.0 / z_present;
    const double g = y.real();
    const double xs_sq = z_ref / g - z_ref * z_ref;
    if (!(xs_sq > 0)) {
      throw UnmatchableError("synthesize_lsection: conductance of " + describe(z_present) +
                             " is not below 1/z_ref");
    }
    const double xs = std::sqrt(xs_sq);
    const double b_shunt = y.imag() - xs / (z_ref * z_ref + xs * xs);
    if (!(b_shunt > 0)) {
      throw UnmatchableError("synthesize_lsection: " + describe(z_present) +
                             " needs an inductive shunt element");
    }
    out.c_series = 1.0 / (omega * xs);
    out.c_shunt = b_shunt / omega;
  } else {
    // Series C toward the loop, shunt C across z_ref.
    const double r = z_present.real();
    const double q_sq = z_ref / r - 1.0;
    if (!(q_sq > 0)) {
      throw UnmatchableError("synthesize_lsection: resistance of " + describe(z_present) +
                             " is not below z_ref");
    }
    const double q = std::sqrt(q_sq);
    const double xs = -z_present.imag() - q * r;
    if (!(xs > 0)) {
      throw UnmatchableError("synthesize_lsection: " + describe(z_present) +
                             " needs an inductive series element");
    }
    out.c_series = 1.0 / (omega * xs);
    out.c_shunt = q / (z_ref * omega);
  }
  if (!std::isfinite(out.c_series) || !std::isfinite(out.c_shunt)) {
    throw UnmatchableError("synthesize_lsection: degenerate target " + describe(z_present));
  }

  const cplx check = presented_impedance(out, z_ref, omega);
  if (std::abs(check - z_present) > 1e-9 * std::abs(z_present)) {
    throw Error("synthesize_lsection: self-check failed for " + describe(z_present));
  }
  return out;
}

void validate(const VaractorDiode& d) {
  if (!(d.c_j0 > 0) || !(d.v_j > 0) || !(d.grading > 0 && d.grading < 1) || !(d.c_pkg >= 0) ||
      !(d.v_r_max > 0) || !(d.b_v > d.v_r_max)) {
    throw InvalidArgument("varactor '" + d.name +
                          "': need c_j0 > 0, v_j > 0, 0 < grading < 1, b_v > v_r_max > 0");
  }
}

double varactor_capacitance(const VaractorDiode& d, double v_r) {
  constexpr double kSlack = 1e-12;
  if (!(v_r >= -kSlack) || !(v_r <= d.v_r_max * (1 + kSlack))) {
    throw BiasRangeError("varactor '" + d.name + "': bias " + std::to_string(v_r) +
                         " V outside [0, " + std::to_string(d.v_r_max) + "] V");
  }
  const double v = std::clamp(v_r, 0.0, d.v_r_max);
  return d.c_j0 / std::pow(1.0 + v / d.v_j, d.grading) + d.c_pkg;
}

void validate(const VaractorStack& s) {
  validate(s.diode);
  if (s.n_pairs < 1) throw InvalidArgument("varactor stack: n_pairs must be >= 1");
}

double stack_capacitance(const VaractorStack& s, double v_r) {
  return s.n_pairs * varactor_capacitance(s.diode, v_r) / 2.0;
}

CapacitanceBand stack_band(const VaractorStack& s) {
  return {stack_capacitance(s, s.diode.v_r_max), stack_capacitance(s, 0.0)};
}

double bias_for_capacitance(const VaractorStack& s, double c_target) {
  validate(s);
  const auto band = stack_band(s);
  if (!band.contains(c_target)) {
    throw UntunableError("varactor stack (" + std::to_string(s.n_pairs) + " pairs): " +
                         std::to_string(c_target * 1e12) + " pF outside [" +
                         std::to_string(band.c_min * 1e12) + ", " +
                         std::to_string(band.c_max * 1e12) + "] pF");
  }
  if (c_target == band.c_max) return 0.0;
  if (c_target == band.c_min) return s.diode.v_r_max;
  return numeric::bisect([&](double v) { return stack_capacitance(s, v) - c_target; }, 0.0,
                         s.diode.v_r_max, 0.0);
}

PowerCheck power_limit_check(const VaractorStack& s, double v_r, double v_rf_peak) {
  const double margin = s.diode.b_v - v_r - v_rf_peak;
  return {margin > 0, margin};
}

double calibrate_junction_voltage(const VaractorDiode& base, std::span<const StackEndpoint> points,
                                  double v_lo, double v_hi) {
  if (points.empty()) throw InvalidArgument("calibrate_junction_voltage: no endpoints");
  auto misfit = [&](double v_j) {
    VaractorDiode d = base;
    d.v_j = v_j;
    double sum = 0.0;
    for (const auto& p : points) {
      const double c = p.n_pairs * (d.c_j0 / std::pow(1.0 + p.v_r / v_j, d.grading) + d.c_pkg) / 2;
      const double rel = c / p.capacitance - 1.0;
      sum += rel * rel;
    }
    return -sum;
  };
  return numeric::golden_section_maximize(misfit, v_lo, v_hi, 1e-10).x;
}

double calibrate_zero_bias_capacitance(const VaractorDiode& base, int n_pairs, double c_top) {
  if (n_pairs < 1 || !(c_top > 0)) {
    throw InvalidArgument("calibrate_zero_bias_capacitance: need n_pairs >= 1 and c_top > 0");
  }
  const double c_j0 = 2.0 * c_top / n_pairs - base.c_pkg;
  if (!(c_j0 > 0)) throw NoSolution("calibrate_zero_bias_capacitance: package C exceeds target");
  return c_j0;
}

VaractorDiode smv1494(double v_j) {
  return {"SMV1494", 58e-12, v_j, 0.47, 0.0, 30.0, 15.0};
}

VaractorDiode mtv4045_10(double c_j0) {
  return {"MTV4045-10", c_j0, 0.7, 0.46, 0.0, 45.0, 40.0};
}

VaractorDiode mtv4060_16(double c_j0) {
  return {"MTV4060-16", c_j0, 0.7, 0.46, 0.0, 60.0, 55.0};
}

void validate(const TunableLSection& t) {
  validate(t.series);
  validate(t.shunt);
}

LSection realize(const TunableLSection& t, const BiasPair& bias) {
  return {stack_capacitance(t.series, bias.series_v), stack_capacitance(t.shunt, bias.shunt_v),
          t.orientation};
}

BiasPair bias_for(const TunableLSection& t, const LSection& target) {
  return {bias_for_capacitance(t.series, target.c_series),
          bias_for_capacitance(t.shunt, target.c_shunt)};
}

BiasPair clamped_bias_for(const TunableLSection& t, const LSection& target) {
  auto clamp_into = [](const VaractorStack& s, double c) {
    const auto band = stack_band(s);
    return bias_for_capacitance(s, std::clamp(c, band.c_min, band.c_max));
  };
  return {clamp_into(t.series, target.c_series), clamp_into(t.shunt, target.c_shunt)};
}

}  // namespace wpt
