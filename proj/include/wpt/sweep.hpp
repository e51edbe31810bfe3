#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wpt/tuner.hpp"

namespace wpt {

inline constexpr const char* kToolVersion = "1.0.0";

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  std::vector<double> values() const;
};

void validate(const Range& r, const char* name);

enum class SweepKind { Grid2d, Distance, Lateral, Angular };
const char* to_string(SweepKind k);

// Grid2d evaluates the configured network over distance x frequency without
// tuning. Distance/Lateral/Angular apply the strategy at every placement;
// Lateral and Angular hold distance.lo fixed and sweep `offset` (m or rad).
struct SweepSpec {
  SweepKind kind = SweepKind::Distance;
  Range distance{0.05, 1.0, 96};  // m
  Range frequency{34e6, 42e6, 161};  // Hz
  Range offset{0.0, 0.2, 21};
  TuneStrategy strategy = TuneStrategy::Frequency;
  std::optional<double> network_design_m;  // recorded in the metadata only
  unsigned threads = 0;                    // 0: hardware concurrency
};

void validate(const SweepSpec& spec);

/// CSV-able table: `#`-prefixed metadata, header, rows of preformatted cells.
struct Dataset {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int failures = 0;

  void write_csv(std::ostream& os) const;
};

/// Status token for cells without a value.
inline constexpr const char* kNotApplicable = "NA";

std::string format_number(double x);

const std::vector<std::string>& sweep_header();

/// Rows in deterministic order (outer axis slowest). Per-point solver errors
/// are written into the row as their error token and counted in `failures`.
Dataset run_sweep(const SweepSpec& spec, const SystemConfig& cfg);

enum class MisalignMode { Lateral, Angular };
const char* to_string(MisalignMode m);

/// M12 and efficiencies of a network designed at d_fixed, versus offset
/// (lateral, m) or tilt (angular, rad). Columns:
/// d_m, c_m, theta_rad, m12_h, eta_fixed, eta_max, eta_varactor, varactor_fallback.
Dataset misalign_study(const SystemConfig& cfg, MisalignMode mode, double d_fixed,
                       const Range& offsets, unsigned threads = 0);

// ---------------------------------------------------------------------------
// First-principles reproduction of the reference port-impedance and plateau tables

struct PlateauSummary {
  double d_design;
  std::optional<double> d_critical;
  double eta_mean = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  int samples = 0;
  double ideal_plateau;  // (R_L/(R+R_L))^2 with averaged loop-plane loads
};

/// Frequency-tuned efficiency over the strongly coupled range [d_min, 0.95 d_crit]
/// of a network designed at d_design.
PlateauSummary plateau_summary(const SystemConfig& cfg, double d_design, double d_min = 0.05,
                               int samples = 24, unsigned threads = 0);

struct ReferencePortRow {
  double d;
  cplx z_source;
  cplx z_load;
};

struct ReferencePlateauRow {
  double d_design;
  double plateau;
  double d_critical;
};

/// Measured port impedances of the prototype (ohm) at 20, 35, 50 cm.
const std::vector<ReferencePortRow>& reference_port_impedances();
/// Predicted plateaus and critical-coupling distances for 20/35/50 cm networks.
const std::vector<ReferencePlateauRow>& reference_plateaus();

/// Structured report as a JSON string, plus a plain-text rendering.
struct Report {
  std::string json;
  std::string text;
};

Report report_tables(const SystemConfig& cfg, bool calibrate = true, unsigned threads = 0);

/// Deterministic parallel map over [0, n).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace wpt
