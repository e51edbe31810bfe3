#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "wpt/errors.hpp"

namespace wpt::numeric {

/// Bisection on [lo, hi] for a continuous f with a sign change.
/// Stops once the bracket width is at most x_tol.
template <typename Scalar, typename F>
Scalar bisect(F&& f, Scalar lo, Scalar hi, Scalar x_tol, int max_iter = 500) {
  Scalar f_lo = f(lo);
  Scalar f_hi = f(hi);
  if (f_lo == Scalar(0)) return lo;
  if (f_hi == Scalar(0)) return hi;
  if ((f_lo < 0) == (f_hi < 0)) {
    throw NoSolution("bisect: no sign change on [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  }
  for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;  // bracket exhausted in floating point
    const Scalar f_mid = f(mid);
    if (f_mid == Scalar(0)) return mid;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

template <typename Scalar>
struct Extremum {
  Scalar x;
  Scalar value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <typename Scalar, typename F>
Extremum<Scalar> golden_section_maximize(F&& f, Scalar lo, Scalar hi, Scalar x_tol,
                                         int max_iter = 500) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar c = hi - inv_phi * (hi - lo);
  Scalar d = lo + inv_phi * (hi - lo);
  Scalar fc = f(c);
  Scalar fd = f(d);
  for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc > fd ? Extremum<Scalar>{c, fc} : Extremum<Scalar>{d, fd};
}

}  // namespace wpt::numeric
