#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "wpt/link_model.hpp"
#include "wpt/twoport.hpp"

namespace wpt::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Small hand-rolled generator set over a fixed-seed engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  std::complex<double> passive_impedance(double scale = 100.0) {
    return {log_uniform(1e-2, scale), uniform(-scale, scale)};
  }

  // Series R-L-C with resonance between 1 and 100 MHz.
  Resonator resonator() {
    const double l = log_uniform(0.1e-6, 10e-6);
    const double f0 = log_uniform(1e6, 100e6);
    const double w0 = 2.0 * kPi * f0;
    return {log_uniform(0.02, 5.0), l, 1.0 / (w0 * w0 * l)};
  }

  Link identical_link() {
    const Resonator r = resonator();
    return {r, r, uniform(1e-4, 0.6) * r.l};
  }

  Link link() {
    Resonator a = resonator();
    Resonator b = a;
    b.r *= uniform(0.5, 2.0);
    b.l *= uniform(0.8, 1.25);
    b.c *= uniform(0.8, 1.25);
    return {a, b, uniform(1e-4, 0.6) * std::sqrt(a.l * b.l)};
  }

  // A random reciprocal two-port built from series/shunt/T/line sections.
  Abcd reciprocal_network(int sections) {
    Abcd n = Abcd::identity();
    for (int i = 0; i < sections; ++i) {
      switch (integer(0, 3)) {
        case 0: n = cascade(n, series_abcd<double>(passive_impedance())); break;
        case 1: n = cascade(n, shunt_abcd<double>(1.0 / passive_impedance())); break;
        case 2:
          n = cascade(n, tnetwork_abcd<double>(passive_impedance(), passive_impedance(),
                                               passive_impedance()));
          break;
        default:
          n = cascade(n, tline_abcd(uniform(20.0, 120.0), uniform(0.1, 3.0), uniform(0.05, 1.0)));
      }
    }
    return n;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace wpt::testing
