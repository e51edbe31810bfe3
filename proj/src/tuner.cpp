#include "wpt/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wpt/errors.hpp"
#include "wpt/numeric.hpp"

namespace wpt {

void validate(const SystemConfig& cfg) {
  validate(cfg.loop1.res);
  validate(cfg.loop2.res);
  validate(cfg.loop1.geom);
  validate(cfg.loop2.geom);
  validate(cfg.placement);
  if (cfg.source_network) validate(*cfg.source_network);
  if (cfg.load_network) validate(*cfg.load_network);
  if (cfg.source_tunable) validate(*cfg.source_tunable);
  if (cfg.load_tunable) validate(*cfg.load_tunable);
  if (!(cfg.z_source > 0) || !(cfg.z_load > 0)) {
    throw InvalidArgument("system: terminations must be positive");
  }
  if (!(cfg.nominal_frequency_hz > 0)) throw InvalidArgument("system: nominal frequency must be > 0");
  if (!(cfg.freq_tune_tol_hz > 0)) throw InvalidArgument("system: frequency tolerance must be > 0");
  if (cfg.freq_scan_points < 8) throw InvalidArgument("system: need at least 8 scan points");
}

SystemConfig default_system() {
  SystemConfig cfg;
  cfg.loop1.res = {0.23, 0.596e-6, 30.6e-12};
  cfg.loop2.res = {0.20, 0.583e-6, 31.1e-12};
  cfg.loop1.geom = {0.107, 0.385, 50.0, 2.1};
  cfg.loop2.geom = {0.107, 0.395, 50.0, 2.1};
  const VaractorDiode diode = smv1494();
  const TunableLSection stacks{{diode, 3}, {diode, 8}, LOrientation::SeriesAtReference};
  cfg.source_tunable = stacks;
  cfg.load_tunable = stacks;
  return cfg;
}

SystemConfig bare_loops(SystemConfig cfg) {
  cfg.loop1.geom.feed_length = 0.0;
  cfg.loop2.geom.feed_length = 0.0;
  cfg.source_network.reset();
  cfg.load_network.reset();
  return cfg;
}

const char* to_string(ModeLabel m) {
  switch (m) {
    case ModeLabel::Odd: return "odd";
    case ModeLabel::Even: return "even";
    case ModeLabel::Omega0: return "omega0";
  }
  return "unknown";
}

const char* to_string(TuneStrategy s) {
  switch (s) {
    case TuneStrategy::Fixed: return "fixed";
    case TuneStrategy::Frequency: return "freq";
    case TuneStrategy::Impedance: return "imp";
  }
  return "unknown";
}

TuneStrategy parse_strategy(const std::string& s) {
  if (s == "fixed") return TuneStrategy::Fixed;
  if (s == "freq") return TuneStrategy::Frequency;
  if (s == "imp") return TuneStrategy::Impedance;
  throw InvalidArgument("unknown strategy '" + s + "' (expected fixed, freq or imp)");
}

double system_mutual_inductance(const SystemConfig& cfg) {
  return mutual_inductance(cfg.loop1.geom, cfg.loop2.geom, cfg.placement, cfg.quadrature);
}

Link system_link(const SystemConfig& cfg, double m12) {
  return make_link(cfg.loop1.res, cfg.loop2.res, m12);
}

namespace {

Abcd source_side(const SystemConfig& cfg, double omega) {
  const Abcd net = cfg.source_network ? lsection_abcd(*cfg.source_network, omega) : Abcd::identity();
  return cascade(net, feedline_abcd(cfg.loop1.geom, omega));
}

// Oriented from the load termination (port 1) toward loop 2 (port 2).
Abcd load_side(const SystemConfig& cfg, double omega) {
  const Abcd net = cfg.load_network ? lsection_abcd(*cfg.load_network, omega) : Abcd::identity();
  return cascade(net, feedline_abcd(cfg.loop2.geom, omega));
}

}  // namespace

Abcd core_two_port(const SystemConfig& cfg, double m12, double omega) {
  return cascade(feedline_abcd(cfg.loop1.geom, omega),
                 coupled_loop_abcd(system_link(cfg, m12), omega),
                 feedline_abcd(cfg.loop2.geom, omega));
}

Abcd system_two_port(const SystemConfig& cfg, double m12, double omega) {
  return cascade(source_side(cfg, omega), coupled_loop_abcd(system_link(cfg, m12), omega),
                 reversed(load_side(cfg, omega)));
}

double system_efficiency(const SystemConfig& cfg, double m12, double omega) {
  if (m12 == 0.0) return 0.0;  // loops decoupled: no transfer path
  return transducer_gain(system_two_port(cfg, m12, omega), cplx(cfg.z_source, 0),
                         cplx(cfg.z_load, 0));
}

double system_efficiency(const SystemConfig& cfg, double omega) {
  return system_efficiency(cfg, system_mutual_inductance(cfg), omega);
}

double system_reflection_sq(const SystemConfig& cfg, double m12, double omega) {
  cplx zin;
  if (m12 == 0.0) {
    // With no coupling the shunt branch of the T shorts: loop 1 alone terminates the feed.
    zin = input_impedance_of(source_side(cfg, omega), cfg.loop1.res.series_impedance(omega));
  } else {
    zin = input_impedance_of(system_two_port(cfg, m12, omega), cplx(cfg.z_load, 0));
  }
  const cplx zs(cfg.z_source, 0);
  return std::norm((zin - zs) / (zin + zs));
}

LoopPlaneLoads loop_plane_loads(const SystemConfig& cfg, double omega) {
  const cplx rs = output_impedance_of(source_side(cfg, omega), cplx(cfg.z_source, 0));
  const cplx rl = output_impedance_of(load_side(cfg, omega), cplx(cfg.z_load, 0));
  return {rs.real(), rl.real()};
}

CouplingRegime classify_system(const SystemConfig& cfg, double m12) {
  const double w = omega_of(cfg.nominal_frequency_hz);
  const auto loads = loop_plane_loads(cfg, w);
  return classify_coupling(system_link(cfg, m12), loads.r_source, loads.r_load, w);
}

ConjugateMatch<double> optimal_port_impedances(const SystemConfig& cfg, double m12, double omega) {
  return simultaneous_conjugate_match(abcd_to_z(core_two_port(cfg, m12, omega)));
}

StaticDesign design_static_network(const SystemConfig& cfg, double d_design, double omega) {
  const double m12 = mutual_inductance_coaxial(cfg.loop1.geom.radius, cfg.loop2.geom.radius, d_design);
  const auto match = optimal_port_impedances(cfg, m12, omega);
  return {synthesize_lsection(match.z_source, cfg.z_source, omega, cfg.orientation),
          synthesize_lsection(match.z_load, cfg.z_load, omega, cfg.orientation), match.z_source,
          match.z_load, m12};
}

SystemConfig with_static_network(SystemConfig cfg, double d_design) {
  const auto design = design_static_network(cfg, d_design, omega_of(cfg.nominal_frequency_hz));
  cfg.source_network = design.source;
  cfg.load_network = design.load;
  return cfg;
}

namespace {

TuneResult evaluate(const SystemConfig& cfg, double m12, double f_hz, ModeLabel label) {
  TuneResult r;
  r.m12 = m12;
  r.frequency_hz = f_hz;
  const double w = omega_of(f_hz);
  r.efficiency = system_efficiency(cfg, m12, w);
  r.reflection_sq = system_reflection_sq(cfg, m12, w);
  r.regime = classify_system(cfg, m12);
  r.mode = label;
  return r;
}

struct Peak {
  double f_hz;
  double eta;
};

// Every interior local maximum of eta(f) on [lo, hi], refined by golden section.
std::vector<Peak> efficiency_peaks(const SystemConfig& cfg, double m12, double lo, double hi) {
  const int n = cfg.freq_scan_points;
  std::vector<double> f(n), eta(n);
  for (int i = 0; i < n; ++i) {
    f[i] = lo + (hi - lo) * i / (n - 1);
    eta[i] = system_efficiency(cfg, m12, omega_of(f[i]));
  }
  const double top = *std::max_element(eta.begin(), eta.end());
  std::vector<Peak> peaks;
  for (int i = 1; i + 1 < n; ++i) {
    if (!(eta[i] > eta[i - 1] && eta[i] >= eta[i + 1])) continue;
    if (eta[i] < 1e-6 * top) continue;  // numerical ripple on a dead band
    auto g = numeric::golden_section_maximize(
        [&](double x) { return system_efficiency(cfg, m12, omega_of(x)); }, f[i - 1], f[i + 1],
        cfg.freq_tune_tol_hz);
    peaks.push_back({g.x, g.value});
  }
  return peaks;
}

}  // namespace

TuneResult fixed_operation(const SystemConfig& cfg) {
  validate(cfg);
  return evaluate(cfg, system_mutual_inductance(cfg), cfg.nominal_frequency_hz, ModeLabel::Omega0);
}

TuneResult frequency_tune(const SystemConfig& cfg) {
  validate(cfg);
  const double m12 = system_mutual_inductance(cfg);
  const double f_nom = cfg.nominal_frequency_hz;
  if (m12 == 0.0) return evaluate(cfg, m12, f_nom, ModeLabel::Omega0);

  const auto regime = classify_system(cfg, m12);
  if (regime.tag != Regime::Strong) return evaluate(cfg, m12, f_nom, ModeLabel::Omega0);

  // Seed the scan window from the averaged bare-loop modes, loaded with the
  // loop-plane resistances; the cascade shifts the peaks, hence the padding.
  const Link sym = symmetrized(system_link(cfg, m12));
  const auto loads = loop_plane_loads(cfg, omega_of(f_nom));
  const double f_c = hertz_of(sym.res1.omega0());
  double f_even = f_c / std::sqrt(1.0 - sym.coupling_coefficient());
  double f_odd = f_c / std::sqrt(1.0 + sym.coupling_coefficient());
  if (auto modes = mode_frequencies(sym, 0.5 * (loads.r_source + loads.r_load))) {
    f_even = std::max(f_even, modes->f_even);
    f_odd = std::min(f_odd, modes->f_odd);
  }
  const double pad = 0.05 * f_c;
  const double lo = std::min(f_c, f_nom) - 2.0 * (f_c - f_odd) - pad;
  const double hi = std::max(f_c, f_nom) + 2.0 * (f_even - f_c) + pad;

  const auto peaks = efficiency_peaks(cfg, m12, std::max(lo, 0.05 * f_c), hi);
  if (peaks.empty()) return evaluate(cfg, m12, f_nom, ModeLabel::Omega0);

  // The odd (anti-phase) mode is the lower-frequency peak. A lone peak is
  // labelled by its side of the loop resonance.
  ModeLabel label;
  if (peaks.size() >= 2) {
    label = ModeLabel::Odd;
  } else {
    label = peaks.front().f_hz <= f_c ? ModeLabel::Odd : ModeLabel::Even;
  }
  TuneResult r = evaluate(cfg, m12, peaks.front().f_hz, label);
  r.regime = regime;
  return r;
}

namespace {

struct ImpedanceSolution {
  std::optional<LSection> source_target;
  std::optional<LSection> load_target;
  std::optional<std::array<double, 4>> bias;
};

ImpedanceSolution solve_impedance(const SystemConfig& cfg, double m12) {
  ImpedanceSolution out;
  const double w = omega_of(cfg.nominal_frequency_hz);
  if (m12 == 0.0) return out;
  ConjugateMatch<double> match;
  try {
    match = optimal_port_impedances(cfg, m12, w);
  } catch (const NoSolution&) {
    return out;
  }
  const auto& st = *cfg.source_tunable;
  const auto& lt = *cfg.load_tunable;
  try {
    out.source_target = synthesize_lsection(match.z_source, cfg.z_source, w, st.orientation);
    out.load_target = synthesize_lsection(match.z_load, cfg.z_load, w, lt.orientation);
  } catch (const UnmatchableError&) {
    return out;
  }
  try {
    const auto bs = bias_for(st, *out.source_target);
    const auto bl = bias_for(lt, *out.load_target);
    out.bias = std::array<double, 4>{bs.series_v, bs.shunt_v, bl.series_v, bl.shunt_v};
  } catch (const UntunableError&) {
  }
  return out;
}

void require_tunables(const SystemConfig& cfg) {
  if (!cfg.source_tunable || !cfg.load_tunable) {
    throw InvalidArgument("impedance tuning needs varactor networks on both sides");
  }
}

}  // namespace

TuneResult impedance_tune(const SystemConfig& cfg) {
  validate(cfg);
  require_tunables(cfg);
  const double m12 = system_mutual_inductance(cfg);
  const auto sol = solve_impedance(cfg, m12);
  const auto& st = *cfg.source_tunable;
  const auto& lt = *cfg.load_tunable;

  SystemConfig tuned = cfg;
  if (sol.bias) {
    const auto& b = *sol.bias;
    tuned.source_network = realize(st, {b[0], b[1]});
    tuned.load_network = realize(lt, {b[2], b[3]});
    TuneResult r = evaluate(tuned, m12, cfg.nominal_frequency_hz, ModeLabel::Omega0);
    r.bias_v = b;
    return r;
  }

  // Out of reach: park each capacitor at the nearest achievable value (zero
  // bias where no target exists) and frequency-tune the resulting network.
  const BiasPair bs = sol.source_target ? clamped_bias_for(st, *sol.source_target) : BiasPair{0, 0};
  const BiasPair bl = sol.load_target ? clamped_bias_for(lt, *sol.load_target) : BiasPair{0, 0};
  tuned.source_network = realize(st, bs);
  tuned.load_network = realize(lt, bl);
  TuneResult r = frequency_tune(tuned);
  r.bias_v = std::array<double, 4>{bs.series_v, bs.shunt_v, bl.series_v, bl.shunt_v};
  r.fallback = true;
  return r;
}

TuneResult run_strategy(const SystemConfig& cfg, TuneStrategy s) {
  switch (s) {
    case TuneStrategy::Fixed: return fixed_operation(cfg);
    case TuneStrategy::Frequency: return frequency_tune(cfg);
    case TuneStrategy::Impedance: return impedance_tune(cfg);
  }
  throw InvalidArgument("run_strategy: unknown strategy");
}

std::optional<double> critical_coupling_distance(const SystemConfig& cfg) {
  validate(cfg);
  const double w = omega_of(cfg.nominal_frequency_hz);
  const auto loads = loop_plane_loads(cfg, w);
  const double loss = (cfg.loop1.res.r + loads.r_source) * (cfg.loop2.res.r + loads.r_load);
  const double m_crit = std::sqrt(loss) / w;
  try {
    return distance_for_mutual(cfg.loop1.geom, cfg.loop2.geom, m_crit);
  } catch (const NoSolution&) {
    return std::nullopt;
  }
}

bool impedance_tunable(const SystemConfig& cfg) {
  validate(cfg);
  require_tunables(cfg);
  return solve_impedance(cfg, system_mutual_inductance(cfg)).bias.has_value();
}

double tunable_boundary_distance(const SystemConfig& cfg, double d_lo, double d_hi, double tol) {
  auto tunable_at = [&](double d) {
    SystemConfig c = cfg;
    c.placement = {d, 0.0, 0.0};
    return impedance_tunable(c);
  };
  if (tunable_at(d_lo) || !tunable_at(d_hi)) {
    throw NoSolution("tunable_boundary_distance: no untunable-to-tunable transition in range");
  }
  while (d_hi - d_lo > tol) {
    const double mid = 0.5 * (d_lo + d_hi);
    (tunable_at(mid) ? d_hi : d_lo) = mid;
  }
  return 0.5 * (d_lo + d_hi);
}

SystemConfig with_feed_permittivity(SystemConfig cfg, double eps_eff) {
  cfg.loop1.geom.feed_eps_eff = eps_eff;
  cfg.loop2.geom.feed_eps_eff = eps_eff;
  return cfg;
}

double calibrate_feed_permittivity(const SystemConfig& cfg, std::span<const PortTarget> targets,
                                   double lo, double hi) {
  if (targets.empty()) throw InvalidArgument("calibrate_feed_permittivity: no targets");
  const double w = omega_of(cfg.nominal_frequency_hz);
  auto rel_sq = [](double got, double want) {
    const double e = (got - want) / want;
    return e * e;
  };
  auto score = [&](double eps) {
    const SystemConfig c = with_feed_permittivity(cfg, eps);
    double sum = 0.0;
    for (const auto& t : targets) {
      const double m12 = mutual_inductance_coaxial(c.loop1.geom.radius, c.loop2.geom.radius, t.d);
      const auto z = optimal_port_impedances(c, m12, w);
      sum += rel_sq(z.z_source.real(), t.z_source.real()) + rel_sq(z.z_source.imag(), t.z_source.imag()) +
             rel_sq(z.z_load.real(), t.z_load.real()) + rel_sq(z.z_load.imag(), t.z_load.imag());
    }
    return -sum;
  };
  return numeric::golden_section_maximize(score, lo, hi, 1e-9).x;
}

}  // namespace wpt
