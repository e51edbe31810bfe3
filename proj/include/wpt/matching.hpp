#pragma once

#include <span>
#include <string>

#include "wpt/twoport.hpp"
#include "wpt/types.hpp"

namespace wpt {

// ---------------------------------------------------------------------------
// Two-capacitor L-sections
//
// Port convention for every L-section two-port: port 1 faces the real
// reference impedance (the 50 ohm source or meter), port 2 faces the loop feed.

enum class LOrientation {
  SeriesAtReference,  // series C on the reference side, shunt C across the loop port
  ShuntAtReference,   // shunt C across the reference port, series C toward the loop
};

const char* to_string(LOrientation o);

struct LSection {
  double c_series = 0.0;  // farad
  double c_shunt = 0.0;   // farad
  LOrientation orientation = LOrientation::SeriesAtReference;
};

void validate(const LSection& ls);

Abcd lsection_abcd(const LSection& ls, double omega);

/// Impedance the L-section presents at its loop port when port 1 sees z_ref.
cplx presented_impedance(const LSection& ls, double z_ref, double omega);

/// Capacitances such that the L-section, terminated in z_ref, presents
/// z_present at its loop port. Throws UnmatchableError when a strictly
/// capacitive two-element network cannot reach the target.
LSection synthesize_lsection(cplx z_present, double z_ref, double omega,
                             LOrientation orientation = LOrientation::SeriesAtReference);

// ---------------------------------------------------------------------------
// Varactors

struct VaractorDiode {
  std::string name;
  double c_j0 = 0.0;     // zero-bias junction capacitance, F
  double v_j = 0.0;      // built-in junction voltage, V
  double grading = 0.5;  // C-V exponent
  double c_pkg = 0.0;    // package capacitance, F
  double b_v = 0.0;      // breakdown voltage, V
  double v_r_max = 0.0;  // operational reverse-bias ceiling, V
};

void validate(const VaractorDiode& d);

/// C_V = C_j0 / (1 + V_R / V_J)^grading + C_pkg.
double varactor_capacitance(const VaractorDiode& d, double v_r);

/// n_pairs anti-series pairs in parallel; each pair contributes C_V / 2.
struct VaractorStack {
  VaractorDiode diode;
  int n_pairs = 1;
};

void validate(const VaractorStack& s);

double stack_capacitance(const VaractorStack& s, double v_r);

struct CapacitanceBand {
  double c_min;  // at v_r_max
  double c_max;  // at zero bias
  bool contains(double c) const { return c >= c_min && c <= c_max; }
};

CapacitanceBand stack_band(const VaractorStack& s);

/// Reverse bias giving c_target (bisection to floating-point resolution). Throws UntunableError outside the band.
double bias_for_capacitance(const VaractorStack& s, double c_target);

struct PowerCheck {
  bool pass;
  double margin;  // b_v - v_r - v_rf_peak, V
};

/// Requires V_R + V_RF < B_V.
PowerCheck power_limit_check(const VaractorStack& s, double v_r, double v_rf_peak);

/// One published stack endpoint used to calibrate V_J.
struct StackEndpoint {
  int n_pairs;
  double v_r;
  double capacitance;
};

/// V_J in [v_lo, v_hi] minimising the summed squared relative error of the
/// stacks against the given endpoints (golden section).
double calibrate_junction_voltage(const VaractorDiode& base, std::span<const StackEndpoint> points,
                                  double v_lo = 0.1, double v_hi = 2.0);

/// Zero-bias junction capacitance placing the stack's zero-bias value at c_top.
double calibrate_zero_bias_capacitance(const VaractorDiode& base, int n_pairs, double c_top);

/// SMV1494-class low-power abrupt varactor (V_J must be calibrated).
VaractorDiode smv1494(double v_j = 0.567);
/// High-breakdown tuning varactors used for the higher-power networks.
/// C_j0 is unpublished; pass the calibrated value.
VaractorDiode mtv4045_10(double c_j0);
VaractorDiode mtv4060_16(double c_j0);

/// Tunable L-section: one stack per capacitor position.
struct TunableLSection {
  VaractorStack series;
  VaractorStack shunt;
  LOrientation orientation = LOrientation::SeriesAtReference;
};

void validate(const TunableLSection& t);

struct BiasPair {
  double series_v;
  double shunt_v;
};

LSection realize(const TunableLSection& t, const BiasPair& bias);
BiasPair bias_for(const TunableLSection& t, const LSection& target);
/// Bias pair whose capacitances are the target clamped into each stack band.
BiasPair clamped_bias_for(const TunableLSection& t, const LSection& target);

}  // namespace wpt
