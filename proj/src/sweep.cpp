#include "wpt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wpt/config.hpp"
#include "wpt/errors.hpp"

namespace wpt {

std::vector<double> Range::values() const {
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  return v;
}

void validate(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.hi > r.lo)) {
    throw InvalidArgument(std::string("sweep: ") + name + " range must satisfy lo < hi");
  }
  if (r.steps < 2) throw InvalidArgument(std::string("sweep: ") + name + " needs at least 2 steps");
}

const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::Grid2d: return "grid2d";
    case SweepKind::Distance: return "distance";
    case SweepKind::Lateral: return "lateral";
    case SweepKind::Angular: return "angular";
  }
  return "unknown";
}

const char* to_string(MisalignMode m) { return m == MisalignMode::Lateral ? "lateral" : "angular"; }

void validate(const SweepSpec& spec) {
  validate(spec.distance, "distance");
  if (spec.kind == SweepKind::Grid2d) validate(spec.frequency, "frequency");
  if (spec.kind == SweepKind::Lateral || spec.kind == SweepKind::Angular) validate(spec.offset, "offset");
  if (!(spec.distance.lo > 0)) throw InvalidArgument("sweep: distances must be positive");
  if (spec.kind == SweepKind::Grid2d && !(spec.frequency.lo > 0)) {
    throw InvalidArgument("sweep: frequencies must be positive");
  }
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void Dataset::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h = {
      "d_m",    "c_m",  "theta_rad",           "f_hz",
      "strategy", "eta", "gamma_sq",           "regime",
      "mode",   "bias_v_source_series",        "bias_v_source_shunt",
      "bias_v_load_series",                    "bias_v_load_shunt",
      "m12_h"};
  return h;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

struct Point {
  double d;
  double c;
  double theta;
  double f;  // grid frequency; NaN when the strategy chooses it
};

std::string error_token(const std::exception& e) {
  if (auto* w = dynamic_cast<const Error*>(&e)) return w->token();
  return "ERR_INTERNAL";
}

std::vector<std::string> sweep_row(const SweepSpec& spec, const SystemConfig& base, const Point& p,
                                   bool& failed) {
  SystemConfig cfg = base;
  cfg.placement = {p.d, p.c, p.theta};
  std::vector<std::string> row = {format_number(p.d), format_number(p.c), format_number(p.theta)};
  failed = false;
  try {
    if (spec.kind == SweepKind::Grid2d) {
      const double m12 = system_mutual_inductance(cfg);
      const double w = omega_of(p.f);
      const double eta = system_efficiency(cfg, m12, w);
      const double g = system_reflection_sq(cfg, m12, w);
      const auto regime = classify_system(cfg, m12);
      row.insert(row.end(), {format_number(p.f), "fixed", format_number(eta), format_number(g),
                             to_string(regime.tag), kNotApplicable, kNotApplicable, kNotApplicable,
                             kNotApplicable, kNotApplicable, format_number(m12)});
      return row;
    }
    const TuneResult r = run_strategy(cfg, spec.strategy);
    std::string mode = to_string(r.mode);
    if (r.fallback) mode = "fallback_" + mode;
    row.insert(row.end(), {format_number(r.frequency_hz), to_string(spec.strategy),
                           format_number(r.efficiency), format_number(r.reflection_sq),
                           to_string(r.regime.tag), mode});
    for (int i = 0; i < 4; ++i) row.push_back(r.bias_v ? format_number((*r.bias_v)[i]) : kNotApplicable);
    row.push_back(format_number(r.m12));
  } catch (const std::exception& e) {
    failed = true;
    const std::string tok = error_token(e);
    row.resize(3);
    row.push_back(std::isnan(p.f) ? tok : format_number(p.f));
    row.push_back(spec.kind == SweepKind::Grid2d ? "fixed" : to_string(spec.strategy));
    while (row.size() < sweep_header().size()) row.push_back(tok);
  }
  return row;
}

std::string range_text(const Range& r) {
  return "[" + format_number(r.lo) + ", " + format_number(r.hi) + "] x " + std::to_string(r.steps);
}

}  // namespace

Dataset run_sweep(const SweepSpec& spec, const SystemConfig& cfg) {
  validate(spec);
  validate(cfg);
  std::vector<Point> points;
  const double nan = std::nan("");
  const auto ds = spec.distance.values();
  switch (spec.kind) {
    case SweepKind::Grid2d:
      for (double d : ds)
        for (double f : spec.frequency.values()) points.push_back({d, 0.0, 0.0, f});
      break;
    case SweepKind::Distance:
      for (double d : ds) points.push_back({d, 0.0, 0.0, nan});
      break;
    case SweepKind::Lateral:
      for (double c : spec.offset.values()) points.push_back({spec.distance.lo, c, 0.0, nan});
      break;
    case SweepKind::Angular:
      for (double t : spec.offset.values()) points.push_back({spec.distance.lo, 0.0, t, nan});
      break;
  }

  Dataset out;
  out.header = sweep_header();
  out.rows.resize(points.size());
  std::vector<char> failed(points.size(), 0);
  parallel_for(points.size(), spec.threads, [&](std::size_t i) {
    bool f = false;
    out.rows[i] = sweep_row(spec, cfg, points[i], f);
    failed[i] = f;
  });
  out.failures = static_cast<int>(std::count(failed.begin(), failed.end(), 1));

  out.metadata = {{"tool", "wpt-sim"},
                  {"tool_version", kToolVersion},
                  {"config_hash", config_hash(cfg)},
                  {"sweep", to_string(spec.kind)},
                  {"strategy", spec.kind == SweepKind::Grid2d ? "fixed" : to_string(spec.strategy)},
                  {"distance_m", range_text(spec.distance)}};
  if (spec.kind == SweepKind::Grid2d) out.metadata.push_back({"frequency_hz", range_text(spec.frequency)});
  if (spec.kind == SweepKind::Lateral || spec.kind == SweepKind::Angular) {
    out.metadata.push_back({"offset", range_text(spec.offset)});
  }
  out.metadata.push_back({"network_design_m", spec.network_design_m
                                                  ? format_number(*spec.network_design_m)
                                                  : std::string(kNotApplicable)});
  out.metadata.push_back({"rows", std::to_string(out.rows.size())});
  out.metadata.push_back({"failed_rows", std::to_string(out.failures)});
  return out;
}

Dataset misalign_study(const SystemConfig& base, MisalignMode mode, double d_fixed,
                       const Range& offsets, unsigned threads) {
  validate(offsets, "offset");
  const SystemConfig networked = with_static_network(base, d_fixed);
  const auto values = offsets.values();
  Dataset out;
  out.header = {"d_m", "c_m", "theta_rad", "m12_h", "eta_fixed", "eta_max", "eta_varactor",
                "varactor_fallback"};
  out.rows.resize(values.size());
  std::vector<char> failed(values.size(), 0);
  parallel_for(values.size(), threads, [&](std::size_t i) {
    const Placement p = mode == MisalignMode::Lateral ? Placement{d_fixed, values[i], 0.0}
                                                      : Placement{d_fixed, 0.0, values[i]};
    std::vector<std::string> row = {format_number(p.d), format_number(p.c), format_number(p.theta)};
    try {
      SystemConfig fixed = networked;
      fixed.placement = p;
      const auto r_fixed = fixed_operation(fixed);
      SystemConfig tun = base;
      tun.placement = p;
      const auto r_tuned = impedance_tune(tun);
      const double eta_max =
          max_efficiency(system_link(base, r_fixed.m12), omega_of(base.nominal_frequency_hz));
      row.insert(row.end(), {format_number(r_fixed.m12), format_number(r_fixed.efficiency),
                             format_number(eta_max), format_number(r_tuned.efficiency),
                             r_tuned.fallback ? "1" : "0"});
    } catch (const std::exception& e) {
      failed[i] = 1;
      while (row.size() < 8) row.push_back(error_token(e));
    }
    out.rows[i] = std::move(row);
  });
  out.failures = static_cast<int>(std::count(failed.begin(), failed.end(), 1));
  out.metadata = {{"tool", "wpt-sim"},
                  {"tool_version", kToolVersion},
                  {"config_hash", config_hash(base)},
                  {"study", std::string("misalign_") + to_string(mode)},
                  {"d_fixed_m", format_number(d_fixed)},
                  {"offset", range_text(offsets)},
                  {"rows", std::to_string(out.rows.size())},
                  {"failed_rows", std::to_string(out.failures)}};
  return out;
}

PlateauSummary plateau_summary(const SystemConfig& base, double d_design, double d_min, int samples,
                               unsigned threads) {
  const SystemConfig cfg = with_static_network(base, d_design);
  PlateauSummary s{};
  s.d_design = d_design;
  s.d_critical = critical_coupling_distance(cfg);
  const auto loads = loop_plane_loads(cfg, omega_of(cfg.nominal_frequency_hz));
  const double r = 0.5 * (cfg.loop1.res.r + cfg.loop2.res.r);
  const double rl = 0.5 * (loads.r_source + loads.r_load);
  s.ideal_plateau = strong_coupling_constants(r, rl).second;
  if (!s.d_critical || *s.d_critical * 0.95 <= d_min) return s;

  const Range ds{d_min, 0.95 * *s.d_critical, samples};
  const auto values = ds.values();
  std::vector<double> eta(values.size(), std::nan(""));
  std::vector<char> strong(values.size(), 0);
  parallel_for(values.size(), threads, [&](std::size_t i) {
    SystemConfig c = cfg;
    c.placement = {values[i], 0.0, 0.0};
    const auto r = frequency_tune(c);
    eta[i] = r.efficiency;
    strong[i] = r.regime.tag == Regime::Strong;
  });
  double sum = 0.0;
  s.eta_min = 1.0;
  s.eta_max = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!strong[i]) continue;
    ++s.samples;
    sum += eta[i];
    s.eta_min = std::min(s.eta_min, eta[i]);
    s.eta_max = std::max(s.eta_max, eta[i]);
  }
  if (s.samples) s.eta_mean = sum / s.samples;
  return s;
}

const std::vector<ReferencePortRow>& reference_port_impedances() {
  static const std::vector<ReferencePortRow> rows = {
      {0.20, {5.94, -30.15}, {5.45, -29.73}},
      {0.35, {1.66, -30.19}, {1.52, -29.76}},
      {0.50, {0.76, -30.20}, {0.70, -29.77}},
  };
  return rows;
}

const std::vector<ReferencePlateauRow>& reference_plateaus() {
  static const std::vector<ReferencePlateauRow> rows = {
      {0.20, 0.7937, 0.1913},
      {0.35, 0.4958, 0.2979},
      {0.50, 0.3114, 0.3495},
  };
  return rows;
}

Report report_tables(const SystemConfig& base, bool calibrate, unsigned threads) {
  using nlohmann::json;
  SystemConfig cfg = base;
  std::vector<PortTarget> targets;
  for (const auto& r : reference_port_impedances()) targets.push_back({r.d, r.z_source, r.z_load});
  if (calibrate) cfg = with_feed_permittivity(cfg, calibrate_feed_permittivity(cfg, targets));

  const double w = omega_of(cfg.nominal_frequency_hz);
  auto rel = [](double got, double want) { return (got - want) / std::abs(want); };
  auto cjson = [](cplx z) { return json::array({z.real(), z.imag()}); };

  json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = config_hash(base);
  j["nominal_frequency_hz"] = cfg.nominal_frequency_hz;
  j["feed_eps_eff"] = cfg.loop1.geom.feed_eps_eff;
  j["feed_eps_eff_calibrated"] = calibrate;

  std::ostringstream txt;
  char line[256];
  txt << "Optimal port impedances (ohm), feed eps_eff = " << format_number(cfg.loop1.geom.feed_eps_eff)
      << "\n";
  txt << "  d_cm  Z_S computed        Z_S reference     Z_L computed        Z_L reference\n";
  json ports = json::array();
  for (const auto& r : reference_port_impedances()) {
    json row;
    row["d_m"] = r.d;
    row["z_source_reference_ohm"] = cjson(r.z_source);
    row["z_load_reference_ohm"] = cjson(r.z_load);
    try {
      const double m12 = mutual_inductance_coaxial(cfg.loop1.geom.radius, cfg.loop2.geom.radius, r.d);
      const auto z = optimal_port_impedances(cfg, m12, w);
      row["z_source_ohm"] = cjson(z.z_source);
      row["z_load_ohm"] = cjson(z.z_load);
      row["rel_dev"] = {{"z_source_re", rel(z.z_source.real(), r.z_source.real())},
                        {"z_source_im", rel(z.z_source.imag(), r.z_source.imag())},
                        {"z_load_re", rel(z.z_load.real(), r.z_load.real())},
                        {"z_load_im", rel(z.z_load.imag(), r.z_load.imag())}};
      const auto design = design_static_network(cfg, r.d, w);
      row["source_network_pf"] = {{"c_series", design.source.c_series * 1e12},
                                  {"c_shunt", design.source.c_shunt * 1e12}};
      row["load_network_pf"] = {{"c_series", design.load.c_series * 1e12},
                                {"c_shunt", design.load.c_shunt * 1e12}};
      std::snprintf(line, sizeof line, "  %4.0f  %6.2f %+7.2fj     %6.2f %+7.2fj   %6.2f %+7.2fj     %6.2f %+7.2fj\n",
                    r.d * 100, z.z_source.real(), z.z_source.imag(), r.z_source.real(),
                    r.z_source.imag(), z.z_load.real(), z.z_load.imag(), r.z_load.real(),
                    r.z_load.imag());
      txt << line;
    } catch (const Error& e) {
      row["error"] = e.token();
      txt << "  " << format_number(r.d * 100) << "  " << e.token() << "\n";
    }
    ports.push_back(row);
  }
  j["port_impedances"] = ports;

  txt << "\nFrequency-tuned plateaus\n";
  txt << "  design_cm  plateau(mean)  [min, max]          ideal    reference  d_crit_cm  reference\n";
  json plateaus = json::array();
  for (const auto& r : reference_plateaus()) {
    json row;
    row["d_design_m"] = r.d_design;
    row["plateau_reference"] = r.plateau;
    row["d_critical_reference_m"] = r.d_critical;
    try {
      const auto s = plateau_summary(cfg, r.d_design, 0.05, 24, threads);
      row["plateau_mean"] = s.eta_mean;
      row["plateau_min"] = s.eta_min;
      row["plateau_max"] = s.eta_max;
      row["plateau_samples"] = s.samples;
      row["ideal_plateau"] = s.ideal_plateau;
      row["d_critical_m"] = s.d_critical ? json(*s.d_critical) : json(kNotApplicable);
      row["plateau_dev_pp"] = 100 * (s.eta_mean - r.plateau);
      if (s.d_critical) row["d_critical_rel_dev"] = rel(*s.d_critical, r.d_critical);
      std::snprintf(line, sizeof line, "  %9.0f  %12.2f%%  [%6.2f%%, %6.2f%%]  %6.2f%%  %8.2f%%  %9.2f  %9.2f\n",
                    r.d_design * 100, 100 * s.eta_mean, 100 * s.eta_min, 100 * s.eta_max,
                    100 * s.ideal_plateau, 100 * r.plateau,
                    s.d_critical ? *s.d_critical * 100 : std::nan(""), r.d_critical * 100);
      txt << line;
    } catch (const Error& e) {
      row["error"] = e.token();
      txt << "  " << format_number(r.d_design * 100) << "  " << e.token() << "\n";
    }
    plateaus.push_back(row);
  }
  j["plateaus"] = plateaus;
  return {j.dump(2), txt.str()};
}

}  // namespace wpt
