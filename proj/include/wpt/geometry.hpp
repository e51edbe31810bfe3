#pragma once

#include <Eigen/Dense>

#include "wpt/twoport.hpp"

namespace wpt {

/// Physical description of one shielded loop and its coaxial feed.
struct LoopGeometry {
  double radius = 0.107;       // m
  double feed_length = 0.385;  // m
  double feed_z0 = 50.0;       // ohm
  double feed_eps_eff = 2.1;   // relative permittivity setting the feed phase constant
};

void validate(const LoopGeometry& g);

/// Position of loop 2 relative to loop 1. Loop 1 lies in the z = 0 plane,
/// centred on the origin. Loop 2 is centred at (c, 0, d) and tilted by theta
/// about the y-directed axis through its own centre.
struct Placement {
  double d = 0.2;      // axial distance, m
  double c = 0.0;      // lateral offset, m
  double theta = 0.0;  // tilt between loop planes, rad
};

void validate(const Placement& p);

/// A circular filament in space: centre plus an orthonormal in-plane basis.
struct LoopFilament {
  Eigen::Vector3d center;
  Eigen::Vector3d u;
  Eigen::Vector3d v;
  double radius;
};

LoopFilament reference_filament(double radius);
LoopFilament placed_filament(double radius, const Placement& p);

// Complete elliptic integrals in the parameter convention m = k^2.
double elliptic_k(double m);
double elliptic_e(double m);

/// Maxwell's formula for coaxial filaments:
///   M = mu0 sqrt(r1 r2) [(2/k - k) K(k^2) - (2/k) E(k^2)],
///   k^2 = 4 r1 r2 / ((r1 + r2)^2 + d^2).
double mutual_inductance_coaxial(double r1, double r2, double d);

struct QuadratureOptions {
  int initial_points = 64;
  int max_points = 4096;
  double rel_tol = 1e-8;
};

/// Neumann double line integral (mu0/4pi) \oint\oint dl1.dl2 / |x1 - x2| by
/// periodic trapezoid rule in both angles, doubling the grid until two
/// successive grids agree to rel_tol.
double neumann_mutual_inductance(const LoopFilament& a, const LoopFilament& b,
                                 const QuadratureOptions& opts = {});

/// Mutual inductance for a placement; the coaxial case uses the closed form.
double mutual_inductance(const LoopGeometry& g1, const LoopGeometry& g2, const Placement& p,
                         const QuadratureOptions& opts = {});

/// Coaxial separation with mutual_inductance_coaxial(d) = m_target, to 1e-9 m.
double distance_for_mutual(const LoopGeometry& g1, const LoopGeometry& g2, double m_target);

double feed_phase_constant(const LoopGeometry& g, double omega);
Abcd feedline_abcd(const LoopGeometry& g, double omega);

}  // namespace wpt
