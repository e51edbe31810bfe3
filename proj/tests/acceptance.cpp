// Acceptance checks AC-1..AC-12. One line per criterion:
//   AC-n: PASS|FAIL <what was measured>
// Usage: wpt_acceptance [AC-n ...]   (no arguments: all)
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "support.hpp"
#include "wpt/geometry.hpp"
#include "wpt/link_model.hpp"
#include "wpt/matching.hpp"
#include "wpt/sweep.hpp"
#include "wpt/tuner.hpp"
#include "wpt/twoport.hpp"

using namespace wpt;
using wpt::testing::Gen;
using wpt::testing::rel_err;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const double kW = 2 * kPi * 38e6;

// Identical loops, R_L real, loaded Q and coupling drawn separately.
struct IdenticalSample {
  Link link;
  double rl;
};

IdenticalSample identical_sample(Gen& g, double q_lo, double q_hi, double k_over_crit_lo,
                                 double k_over_crit_hi) {
  Resonator r = g.resonator();
  const double w0 = r.omega0();
  const double q = g.log_uniform(q_lo, q_hi);  // w0 L / (R + R_L)
  const double s = w0 * r.l / q;
  const double frac = g.uniform(0.05, 0.95);
  r.r = frac * s;
  const double rl = s - r.r;
  // Keep k = m/L at or below 0.6; the ratio range shrinks for low-Q samples.
  const double hi = std::min(k_over_crit_hi, 0.6 * q);
  const double m = g.uniform(std::min(k_over_crit_lo, hi), hi) * s / w0;
  return {{r, r, m}, rl};
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Gen g(1001);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Link link = g.identical_link();
    const double rl = g.log_uniform(0.01, 100.0);
    const double w = link.res1.omega0() * g.uniform(0.8, 1.2);
    const double generic = total_efficiency(link, cplx(rl), cplx(rl), w);
    worst = std::max(worst, rel_err(generic, efficiency_closed_form(link, rl, w)));
  }
  return {worst < 1e-12, fmt("max relative error %.3e over 10^4 samples (tol 1e-12)", worst)};
}

Outcome ac2() {
  Gen g(1002);
  double worst_eta = 0.0, worst_gamma = 0.0;
  for (int i = 0; i < 200; ++i) {
    const IdenticalSample s0 = identical_sample(g, 5.0, 500.0, 1.0, 1.0);
    const double r = s0.link.res1.r, rl = s0.rl;
    const auto [gamma_c, eta_c] = strong_coupling_constants(r, rl);
    // m12 swept across the strong range, up to k = 0.6.
    const double m_crit = (r + rl) / s0.link.res1.omega0();
    const double m_top = 0.6 * s0.link.res1.l;
    if (m_top <= m_crit * 1.01) continue;
    for (int j = 0; j <= 20; ++j) {
      Link link = s0.link;
      link.m12 = m_crit * 1.01 + (m_top - m_crit * 1.01) * j / 20.0;
      const auto modes = mode_frequencies(link, rl);
      if (!modes) return {false, "mode_frequencies returned nothing in strong coupling"};
      for (double f : {modes->f_odd, modes->f_even}) {
        const double w = 2 * kPi * f;
        worst_eta = std::max(worst_eta, std::abs(total_efficiency(link, cplx(rl), cplx(rl), w) - eta_c));
        worst_gamma = std::max(worst_gamma, std::abs(reflection_mag_sq(link, cplx(rl), cplx(rl), w) - gamma_c));
      }
    }
  }
  return {worst_eta < 1e-9 && worst_gamma < 1e-9,
          fmt("max |eta - (RL/(R+RL))^2| %.3e, max ||G|^2 - (R/(R+RL))^2| %.3e (tol 1e-9)", worst_eta,
              worst_gamma)};
}

Outcome ac3() {
  Gen g(1003);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const IdenticalSample s = identical_sample(g, 5.0, 500.0, 1.0, 1.0);
    const double eta = efficiency_at_resonance(s.link, s.rl);
    worst = std::max(worst, rel_err(eta, strong_coupling_constants(s.link.res1.r, s.rl).second));
  }
  // Three-way split: a third of the samples at the exact critical point.
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const int kind = i % 3;
    const double ratio = kind == 0 ? 1.0 : (kind == 1 ? g.uniform(0.05, 0.999) : g.uniform(1.001, 20.0));
    const IdenticalSample s = identical_sample(g, 5.0, 500.0, ratio, ratio);
    const double w0 = s.link.res1.omega0();
    const auto c = classify_coupling(s.link, s.rl, w0);
    const Regime want = kind == 0 ? Regime::Critical : (kind == 1 ? Regime::Weak : Regime::Strong);
    const bool sign_ok = (want == Regime::Strong) == (c.margin > 0) || want == Regime::Critical;
    if (c.tag != want || !sign_ok) ++mismatches;
  }
  return {worst < 1e-13 && mismatches == 0,
          fmt("critical-point identity max rel error %.3e (tol 1e-13); %d/1000 regime mismatches", worst,
              mismatches)};
}

Outcome ac4() {
  Gen g(1004);
  double worst_excess = -1.0;
  double worst_gap = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Link link = g.link();
    const double w0 = link.res1.omega0();
    for (int j = 0; j < 200; ++j) {
      const double w = w0 * (0.9 + 0.2 * j / 199.0);
      const double cap = max_efficiency(link, w);
      for (int i = 0; i < 200; ++i) {
        const double rl = std::exp(std::log(1e-3) + (std::log(1e3) - std::log(1e-3)) * i / 199.0);
        const double eta = total_efficiency(link, cplx(rl), cplx(rl), w);
        worst_excess = std::max(worst_excess, eta - cap);
      }
      // The bound is attained at the optimal terminations.
      const auto t = optimal_terminations(link, w);
      worst_gap = std::max(worst_gap, std::abs(total_efficiency(link, t.zs, t.zl, w) - cap));
    }
  }
  return {worst_excess <= 1e-9 && worst_gap < 1e-9,
          fmt("max eta - eta_max over 20 links x 200 R_L x 200 f: %.3e (tol 1e-9); attained to %.3e",
              worst_excess, worst_gap)};
}

Outcome ac5() {
  Gen g(1005);
  double worst_slope = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const IdenticalSample s = identical_sample(g, 5.0, 50.0, 1.05, 20.0);
    const auto modes = mode_frequencies(s.link, s.rl);
    if (!modes) return {false, "no modes for a strongly coupled sample"};
    for (double f : {modes->f_odd, modes->f_even}) {
      const double w = 2 * kPi * f, h = w * 1e-6;
      auto gamma = [&](double x) { return reflection_mag_sq(s.link, cplx(s.rl), cplx(s.rl), x); };
      const double deriv = (gamma(w + h) - gamma(w - h)) / (2 * h);
      const double scale = gamma(w) / w;
      worst_slope = std::max(worst_slope, std::abs(deriv) / scale);
    }
  }
  double worst_split = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const IdenticalSample s = identical_sample(g, 100.0, 1e4, 1.0 + 1e-3, 10.0);
    const auto modes = mode_frequencies(s.link, s.rl);
    if (!modes) return {false, "no modes for a strongly coupled sample"};
    const double exact = 2 * kPi * (modes->f_even - modes->f_odd);
    worst_split = std::max(worst_split, rel_err(mode_split_approx(s.link, s.rl), exact));
  }
  return {worst_slope < 1e-6 && worst_split < 0.01,
          fmt("max |d|G|^2/dw| / (|G|^2/w) %.3e (tol 1e-6); split approximation max rel error %.3e (tol 1e-2)",
              worst_slope, worst_split)};
}

Outcome ac6() {
  Gen g(1006);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r1 = g.uniform(0.03, 0.2), r2 = g.uniform(0.03, 0.2), d = g.uniform(0.03, 1.0);
    const double closed = mutual_inductance_coaxial(r1, r2, d);
    const double quad = neumann_mutual_inductance(reference_filament(r1), placed_filament(r2, {d, 0.0, 0.0}));
    worst = std::max(worst, rel_err(closed, quad));
  }
  // Oracle value frozen from the quadrature at r = 10.7 cm, d = 20 cm.
  constexpr double kM20 = 1.7519892000403862e-08;
  const double m20 = mutual_inductance(LoopGeometry{}, LoopGeometry{}, {0.2, 0.0, 0.0});
  const double lock = rel_err(m20, kM20);
  // Log-log slope by least squares over [2 m, 4 m].
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 21;
  for (int i = 0; i < n; ++i) {
    const double d = 2.0 + 2.0 * i / (n - 1);
    const double x = std::log(d), y = std::log(mutual_inductance_coaxial(0.107, 0.107, d));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const bool ok = worst < 1e-6 && lock < 1e-6 && std::abs(slope + 3.0) < 0.06;
  return {ok, fmt("closed vs quadrature max rel %.3e (tol 1e-6); M(20 cm) = %.6e H, lock rel %.3e; "
                  "far-field slope %.5f (want -3 +/- 2%%)",
                  worst, m20, lock, slope)};
}

Outcome ac7() {
  const SystemConfig base = default_system();
  std::vector<PortTarget> targets;
  for (const auto& row : reference_port_impedances()) targets.push_back({row.d, row.z_source, row.z_load});
  const double eps = calibrate_feed_permittivity(base, targets, 1.8, 2.3);
  const SystemConfig cfg = with_feed_permittivity(base, eps);
  double worst_re = 0.0, worst_im = 0.0;
  std::string rows;
  for (const auto& t : targets) {
    const auto dsn = design_static_network(cfg, t.d, kW);
    for (auto [got, want] : {std::pair{dsn.z_source_port, t.z_source}, std::pair{dsn.z_load_port, t.z_load}}) {
      worst_re = std::max(worst_re, rel_err(got.real(), want.real()));
      worst_im = std::max(worst_im, rel_err(got.imag(), want.imag()));
    }
    rows += fmt(" %.0fcm: %.2f%+.2fj/%.2f%+.2fj;", t.d * 100, dsn.z_source_port.real(), dsn.z_source_port.imag(),
                dsn.z_load_port.real(), dsn.z_load_port.imag());
  }
  return {worst_re < 0.25 && worst_im < 0.20,
          fmt("eps_eff %.4f; worst real %.1f%% (tol 25%%), worst reactance %.1f%% (tol 20%%);", eps,
              100 * worst_re, 100 * worst_im) +
              rows};
}

Outcome ac8() {
  const SystemConfig base = default_system();
  std::vector<PortTarget> targets;
  for (const auto& row : reference_port_impedances()) targets.push_back({row.d, row.z_source, row.z_load});
  const SystemConfig cfg = with_feed_permittivity(base, calibrate_feed_permittivity(base, targets));
  bool ok = true;
  std::string detail;
  for (const auto& ref : reference_plateaus()) {
    const PlateauSummary p = plateau_summary(cfg, ref.d_design);
    const bool flat = p.samples > 0 && (p.eta_max - p.eta_min) <= 0.03;
    const bool height = p.samples > 0 && std::abs(p.eta_mean - ref.plateau) <= 0.10;
    const bool dist = p.d_critical && std::abs(*p.d_critical - ref.d_critical) <= 0.15 * ref.d_critical;
    ok = ok && flat && height && dist;
    detail += fmt(" %.0fcm: spread %.2fpp%s, plateau %.2f%% vs %.2f%%%s, d_crit %.2f vs %.2f cm%s;",
                  ref.d_design * 100, 100 * (p.eta_max - p.eta_min), flat ? "" : "(!)", 100 * p.eta_mean,
                  100 * ref.plateau, height ? "" : "(!)", p.d_critical ? 100 * *p.d_critical : -1.0,
                  100 * ref.d_critical, dist ? "" : "(!)");
  }
  return {ok, "spread tol 3pp, height tol 10pp, d_crit tol 15%;" + detail};
}

Outcome ac9() {
  const std::vector<StackEndpoint> pts{{3, 0.0, 86.7e-12}, {3, 10.0, 22e-12}, {8, 0.0, 232e-12}, {8, 10.0, 58.8e-12}};
  const double vj = calibrate_junction_voltage(smv1494(), pts);
  const VaractorDiode d = smv1494(vj);
  double worst = 0.0;
  std::string rows;
  for (const auto& p : pts) {
    const double c = stack_capacitance({d, p.n_pairs}, p.v_r);
    worst = std::max(worst, rel_err(c, p.capacitance));
    rows += fmt(" %d pairs @ %.0f V: %.2f pF;", p.n_pairs, p.v_r, c * 1e12);
  }
  return {worst < 0.01, fmt("V_J %.4f V, worst endpoint error %.3f%% (tol 1%%);", vj, 100 * worst) + rows};
}

Outcome ac10() {
  const SystemConfig cfg = default_system();
  const std::vector<SystemConfig> fixed{with_static_network(cfg, 0.20), with_static_network(cfg, 0.35),
                                        with_static_network(cfg, 0.50)};
  int attained = 0, points = 0, dominance_fail = 0;
  double worst_gap = 0.0;
  for (int i = 0; i <= 85; ++i) {
    const double d = 0.15 + 0.01 * i;
    ++points;
    SystemConfig at = cfg;
    at.placement = {d, 0.0, 0.0};
    const TuneResult imp = impedance_tune(at);
    if (imp.fallback) continue;
    ++attained;
    worst_gap = std::max(worst_gap, std::abs(imp.efficiency - max_efficiency(system_link(at, imp.m12), kW)));
    for (SystemConfig f : fixed) {
      f.placement = at.placement;
      if (imp.efficiency < frequency_tune(f).efficiency) ++dominance_fail;
    }
  }
  double boundary = -1.0;
  bool fallback_below = true;
  try {
    boundary = tunable_boundary_distance(cfg, 0.05, 0.20);
    for (double d = 0.05; d < boundary - 1e-3; d += 0.01) {
      SystemConfig at = cfg;
      at.placement = {d, 0.0, 0.0};
      fallback_below = fallback_below && impedance_tune(at).fallback;
    }
  } catch (const NoSolution&) {
  }
  const bool ok = attained > 0 && dominance_fail == 0 && worst_gap < 1e-6 && fallback_below &&
                  boundary >= 0.10 && boundary <= 0.16;
  return {ok, fmt("%d/%d points attainable in 15-100 cm; dominance failures %d; max |eta - eta_max| %.3e "
                  "(tol 1e-6); untunable boundary %.2f cm (accept 10-16), fallback below: %s",
                  attained, points, dominance_fail, worst_gap, 100 * boundary, fallback_below ? "yes" : "no")};
}

Outcome ac11() {
  const SystemConfig cfg = default_system();
  // 20 cm: varactor tuning strictly above the fixed network at every offset.
  int strict_fail = 0, n20 = 0;
  double least = 1.0;
  for (auto [mode, range] : {std::pair{MisalignMode::Lateral, Range{0.0, 0.2, 11}},
                             std::pair{MisalignMode::Angular, Range{0.0, 1.2, 13}}}) {
    const Dataset ds = misalign_study(cfg, mode, 0.20, range);
    for (std::size_t i = 1; i < ds.rows.size(); ++i) {
      ++n20;
      const double fixed = std::stod(ds.rows[i][4]), var = std::stod(ds.rows[i][6]);
      if (ds.rows[i][7] != "0" || !(var > fixed)) ++strict_fail;
      least = std::min(least, var - fixed);
    }
  }
  // 50 cm, small misalignment (offset up to one loop radius, tilt up to 0.5 rad):
  // fixed network against optimal-termination tuning.
  double worst50 = 0.0;
  for (auto [mode, range] : {std::pair{MisalignMode::Lateral, Range{0.0, 0.1, 6}},
                             std::pair{MisalignMode::Angular, Range{0.0, 0.5, 6}}}) {
    const Dataset ds = misalign_study(cfg, mode, 0.50, range);
    for (const auto& row : ds.rows) worst50 = std::max(worst50, std::abs(std::stod(row[5]) - std::stod(row[4])));
  }
  return {strict_fail == 0 && worst50 <= 0.01,
          fmt("20 cm: %d/%d offsets without strict dominance (least margin %.3e); 50 cm: max |eta_tuned - "
              "eta_fixed| %.3fpp (tol 1pp)",
              strict_fail, n20, least, 100 * worst50)};
}

Outcome ac12() {
  Gen g(1012);
  double worst_det = 0.0, worst_z = 0.0, worst_s = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Abcd x = g.reciprocal_network(g.integer(1, 5));
    const double scale = x.m.cwiseAbs().maxCoeff();
    worst_det = std::max(worst_det, std::abs(x.determinant() - 1.0) / std::max(1.0, scale * scale));
    try {
      worst_z = std::max(worst_z, (z_to_abcd(abcd_to_z(x)).m - x.m).cwiseAbs().maxCoeff() / scale);
    } catch (const SingularConversion&) {
    }
    worst_s = std::max(worst_s, (s_to_abcd(abcd_to_s(x, 50.0)).m - x.m).cwiseAbs().maxCoeff() / scale);
  }
  double worst_cross = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Link link = g.identical_link();
    const double rl = g.log_uniform(0.05, 100.0);
    const double w = link.res1.omega0() * g.uniform(0.8, 1.2);
    const auto s = abcd_to_s(coupled_loop_abcd(link, w), rl);
    worst_cross = std::max(worst_cross, std::abs(std::norm(s.s(1, 0)) - efficiency_closed_form(link, rl, w)));
  }
  const bool ok = worst_det < 1e-10 && worst_z < 1e-10 && worst_s < 1e-10 && worst_cross < 1e-9;
  return {ok, fmt("det-1 %.3e, ABCD<->Z %.3e, ABCD<->S %.3e (tol 1e-10); |S21|^2 vs closed form %.3e (tol 1e-9)",
                  worst_det, worst_z, worst_s, worst_cross)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Outcome()>> checks{
      {"AC-1", ac1}, {"AC-2", ac2},   {"AC-3", ac3},   {"AC-4", ac4},   {"AC-5", ac5},   {"AC-6", ac6},
      {"AC-7", ac7}, {"AC-8", ac8},   {"AC-9", ac9},   {"AC-10", ac10}, {"AC-11", ac11}, {"AC-12", ac12}};
  std::vector<std::string> wanted;
  for (int i = 1; i < argc; ++i) wanted.emplace_back(argv[i]);
  if (wanted.empty())
    for (int i = 1; i <= 12; ++i) wanted.push_back("AC-" + std::to_string(i));

  int failed = 0;
  for (const auto& name : wanted) {
    const auto it = checks.find(name);
    if (it == checks.end()) {
      std::printf("%s: FAIL unknown criterion\n", name.c_str());
      ++failed;
      continue;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s: %s %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
