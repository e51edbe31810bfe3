#include "wpt/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wpt/errors.hpp"
#include "wpt/numeric.hpp"
#include "wpt/types.hpp"

namespace wpt {

void validate(const LoopGeometry& g) {
  if (!(g.radius > 0)) throw InvalidArgument("loop geometry: radius must be positive");
  if (!(g.feed_length >= 0)) throw InvalidArgument("loop geometry: feed length must be >= 0");
  if (!(g.feed_z0 > 0)) throw InvalidArgument("loop geometry: feed z0 must be positive");
  if (!(g.feed_eps_eff > 0)) throw InvalidArgument("loop geometry: feed eps_eff must be positive");
}

void validate(const Placement& p) {
  if (!(p.d > 0)) throw InvalidArgument("placement: d must be positive");
  if (!(p.c >= 0)) throw InvalidArgument("placement: c must be non-negative");
  if (!(p.theta >= 0) || !(p.theta < kPi)) {
    throw InvalidArgument("placement: theta must lie in [0, pi)");
  }
}

LoopFilament reference_filament(double radius) {
  return {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), radius};
}

LoopFilament placed_filament(double radius, const Placement& p) {
  return {Eigen::Vector3d(p.c, 0.0, p.d),
          Eigen::Vector3d(std::cos(p.theta), 0.0, -std::sin(p.theta)), Eigen::Vector3d::UnitY(),
          radius};
}

namespace {

// Arithmetic-geometric mean iteration: returns (AGM, sum of 2^(n-1) c_n^2).
struct AgmResult {
  double mean;
  double weighted_sum;
};

AgmResult agm(double m) {
  double a = 1.0;
  double g = std::sqrt(1.0 - m);
  double c = std::sqrt(m);
  double weight = 0.5;
  double sum = weight * c * c;
  for (int i = 0; i < 64; ++i) {
    // Stop at rounding level; further steps only add weighted noise to the sum.
    if (std::abs(a - g) <= 4.0 * std::numeric_limits<double>::epsilon() * a) break;
    const double a_next = 0.5 * (a + g);
    c = 0.5 * (a - g);
    g = std::sqrt(a * g);
    a = a_next;
    weight *= 2.0;
    sum += weight * c * c;
  }
  return {a, sum};
}

}  // namespace

double elliptic_k(double m) {
  if (!(m >= 0.0)) throw InvalidArgument("elliptic_k: parameter m must be >= 0");
  if (!(m < 1.0)) throw ModelDomainError("elliptic_k: K(m) diverges for m >= 1");
  return kPi / (2.0 * agm(m).mean);
}

double elliptic_e(double m) {
  if (!(m >= 0.0) || !(m <= 1.0)) throw InvalidArgument("elliptic_e: parameter m must be in [0, 1]");
  if (m == 1.0) return 1.0;
  const auto r = agm(m);
  return kPi / (2.0 * r.mean) * (1.0 - r.weighted_sum);
}

double mutual_inductance_coaxial(double r1, double r2, double d) {
  if (!(r1 > 0) || !(r2 > 0) || !(d > 0)) {
    throw InvalidArgument("mutual_inductance_coaxial: radii and distance must be positive");
  }
  const double m = 4.0 * r1 * r2 / ((r1 + r2) * (r1 + r2) + d * d);  // m = k^2
  const double k = std::sqrt(m);
  return kMu0 * std::sqrt(r1 * r2) *
         ((2.0 / k - k) * elliptic_k(m) - (2.0 / k) * elliptic_e(m));
}

double neumann_mutual_inductance(const LoopFilament& a, const LoopFilament& b,
                                 const QuadratureOptions& opts) {
  const double scale = kMu0 * std::sqrt(a.radius * b.radius);
  auto evaluate = [&](int n, double& min_dist) {
    const double h = 2.0 * kPi / n;
    Eigen::Matrix3Xd pa(3, n), ta(3, n), pb(3, n), tb(3, n);
    for (int i = 0; i < n; ++i) {
      const double t = h * i;
      const double ct = std::cos(t), st = std::sin(t);
      pa.col(i) = a.center + a.radius * (ct * a.u + st * a.v);
      ta.col(i) = a.radius * (-st * a.u + ct * a.v);
      pb.col(i) = b.center + b.radius * (ct * b.u + st * b.v);
      tb.col(i) = b.radius * (-st * b.u + ct * b.v);
    }
    double sum = 0.0;
    min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        const double dist = (pa.col(i) - pb.col(j)).norm();
        min_dist = std::min(min_dist, dist);
        row += ta.col(i).dot(tb.col(j)) / dist;
      }
      sum += row;
    }
    return kMu0 / (4.0 * kPi) * sum * h * h;
  };

  const double touch = 1e-9 * std::min(a.radius, b.radius);
  double min_dist = 0.0;
  int n = opts.initial_points;
  double prev = evaluate(n, min_dist);
  if (!(min_dist > touch)) {
    throw QuadratureSingularity("neumann_mutual_inductance: loops intersect");
  }
  while (n < opts.max_points) {
    n *= 2;
    const double next = evaluate(n, min_dist);
    if (!(min_dist > touch)) {
      throw QuadratureSingularity("neumann_mutual_inductance: loops intersect");
    }
    const double floor = 1e-6 * scale;  // for near-zero results (perpendicular axes)
    if (std::abs(next - prev) <= opts.rel_tol * std::max(std::abs(next), floor)) return next;
    prev = next;
  }
  throw QuadratureSingularity(
      "neumann_mutual_inductance: no convergence (loops nearly touching?) at " +
      std::to_string(opts.max_points) + " points");
}

double mutual_inductance(const LoopGeometry& g1, const LoopGeometry& g2, const Placement& p,
                         const QuadratureOptions& opts) {
  validate(g1);
  validate(g2);
  validate(p);
  if (p.c == 0.0 && p.theta == 0.0) return mutual_inductance_coaxial(g1.radius, g2.radius, p.d);
  return neumann_mutual_inductance(reference_filament(g1.radius), placed_filament(g2.radius, p),
                                   opts);
}

double distance_for_mutual(const LoopGeometry& g1, const LoopGeometry& g2, double m_target) {
  validate(g1);
  validate(g2);
  const double rmax = std::max(g1.radius, g2.radius);
  const double d_lo = 1e-4 * rmax;
  const double d_hi = 1e3 * rmax;
  const double m_lo = mutual_inductance_coaxial(g1.radius, g2.radius, d_hi);
  const double m_hi = mutual_inductance_coaxial(g1.radius, g2.radius, d_lo);
  if (!(m_target > m_lo) || !(m_target < m_hi)) {
    throw NoSolution("distance_for_mutual: target " + std::to_string(m_target) +
                     " H outside attainable coaxial range");
  }
  auto residual = [&](double d) {
    return mutual_inductance_coaxial(g1.radius, g2.radius, d) - m_target;
  };
  return numeric::bisect(residual, d_lo, d_hi, 1e-11);
}

double feed_phase_constant(const LoopGeometry& g, double omega) {
  return omega * std::sqrt(g.feed_eps_eff) / kSpeedOfLight;
}

Abcd feedline_abcd(const LoopGeometry& g, double omega) {
  return tline_abcd(g.feed_z0, feed_phase_constant(g, omega), g.feed_length);
}

}  // namespace wpt
