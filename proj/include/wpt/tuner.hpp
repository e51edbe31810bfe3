#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "wpt/geometry.hpp"
#include "wpt/link_model.hpp"
#include "wpt/matching.hpp"

namespace wpt {

struct LoopSpec {
  Resonator res;
  LoopGeometry geom;
};

// Port 1 of the system two-port is the source side. The load network is an
// L-section whose port 1 faces the load termination, so it is reversed in the
// cascade: source net . feed1 . coupled loops . feed2 . reversed(load net).
struct SystemConfig {
  LoopSpec loop1;
  LoopSpec loop2;
  Placement placement;
  std::optional<LSection> source_network;
  std::optional<LSection> load_network;
  std::optional<TunableLSection> source_tunable;
  std::optional<TunableLSection> load_tunable;
  LOrientation orientation = LOrientation::SeriesAtReference;  // for static designs
  double z_source = 50.0;
  double z_load = 50.0;
  double nominal_frequency_hz = 38e6;  // design and impedance-tuning frequency
  double freq_tune_tol_hz = 1.0;
  int freq_scan_points = 512;
  QuadratureOptions quadrature;
};

void validate(const SystemConfig& cfg);

/// Loops and feeds of the prototype system.
SystemConfig default_system();

/// Same config with feedlines removed and networks cleared: the bare-loop model.
SystemConfig bare_loops(SystemConfig cfg);

enum class ModeLabel { Odd, Even, Omega0 };
const char* to_string(ModeLabel m);

enum class TuneStrategy { Fixed, Frequency, Impedance };
const char* to_string(TuneStrategy s);
TuneStrategy parse_strategy(const std::string& s);

struct TuneResult {
  double frequency_hz = 0.0;
  // source series, source shunt, load series, load shunt
  std::optional<std::array<double, 4>> bias_v;
  double efficiency = 0.0;
  double reflection_sq = 1.0;
  CouplingRegime regime{Regime::Weak, 0.0};
  ModeLabel mode = ModeLabel::Omega0;
  bool fallback = false;
  double m12 = 0.0;
};

double system_mutual_inductance(const SystemConfig& cfg);
Link system_link(const SystemConfig& cfg, double m12);

/// Full cascade at omega. Throws SingularNetwork for m12 = 0.
Abcd system_two_port(const SystemConfig& cfg, double m12, double omega);
/// Feedlines and coupled loops only (no matching networks).
Abcd core_two_port(const SystemConfig& cfg, double m12, double omega);

/// |S21|^2 between the external real terminations; 0 when m12 = 0.
double system_efficiency(const SystemConfig& cfg, double m12, double omega);
double system_efficiency(const SystemConfig& cfg, double omega);
double system_reflection_sq(const SystemConfig& cfg, double m12, double omega);

/// Re of the impedance seen from each loop into feedline + network + termination.
struct LoopPlaneLoads {
  double r_source;
  double r_load;
};
LoopPlaneLoads loop_plane_loads(const SystemConfig& cfg, double omega);

CouplingRegime classify_system(const SystemConfig& cfg, double m12);

struct StaticDesign {
  LSection source;
  LSection load;
  cplx z_source_port;  // optimal impedance presented to the source feedline port
  cplx z_load_port;
  double m12;
};

/// Conjugate-matched pair of impedances at the feedline ports of the loops
/// placed at (d, c, theta), at omega.
ConjugateMatch<double> optimal_port_impedances(const SystemConfig& cfg, double m12, double omega);

StaticDesign design_static_network(const SystemConfig& cfg, double d_design, double omega);

/// Copy of cfg with both fixed networks set from a static design at d_design.
SystemConfig with_static_network(SystemConfig cfg, double d_design);

/// Operation at the nominal frequency, networks as configured.
TuneResult fixed_operation(const SystemConfig& cfg);
TuneResult frequency_tune(const SystemConfig& cfg);
TuneResult impedance_tune(const SystemConfig& cfg);
TuneResult run_strategy(const SystemConfig& cfg, TuneStrategy s);

/// Coaxial distance at which the loop-plane regime test flips, at the nominal
/// frequency with the configured networks. Empty when no flip exists.
std::optional<double> critical_coupling_distance(const SystemConfig& cfg);

/// True when impedance tuning at cfg's placement stays inside every stack band.
bool impedance_tunable(const SystemConfig& cfg);

/// Coaxial distance in [d_lo, d_hi] where impedance tuning turns attainable
/// (untunable at d_lo, tunable at d_hi). Throws NoSolution otherwise.
double tunable_boundary_distance(const SystemConfig& cfg, double d_lo, double d_hi,
                                 double tol = 1e-5);

struct PortTarget {
  double d;
  cplx z_source;
  cplx z_load;
};

/// Feed eps_eff in [lo, hi] minimising summed squared relative error of the
/// designed port impedances against the targets (real and imaginary parts separately).
double calibrate_feed_permittivity(const SystemConfig& cfg, std::span<const PortTarget> targets,
                                   double lo = 1.8, double hi = 2.3);

SystemConfig with_feed_permittivity(SystemConfig cfg, double eps_eff);

}  // namespace wpt
