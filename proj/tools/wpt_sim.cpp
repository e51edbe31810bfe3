// wpt-sim: parameter sweeps and design tables for a two-loop resonant link.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wpt/config.hpp"
#include "wpt/errors.hpp"
#include "wpt/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPartial = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string config_path;
  std::string out_path;
  std::vector<double> design_cm;
  std::string strategy = "freq";
  int points = 0;
  unsigned threads = 0;
};

wpt::SystemConfig load(const Options& o) {
  return o.config_path.empty() ? wpt::default_system() : wpt::load_config(o.config_path);
}

// Writes to --out, or stdout. Several designs get a _d<cm>cm suffix before the extension.
void emit(const Options& o, const std::string& body, const std::string& suffix = "") {
  if (o.out_path.empty()) {
    std::cout << body;
    return;
  }
  std::string path = o.out_path;
  if (!suffix.empty()) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
      path += suffix;
    } else {
      path.insert(dot, suffix);
    }
  }
  std::ofstream out(path);
  if (!out) throw wpt::ConfigError(path + ": cannot open for writing");
  out << body;
}

std::string suffix_for(double cm, std::size_t count) {
  return count > 1 ? "_d" + wpt::format_number(cm) + "cm" : "";
}

std::string csv(const wpt::Dataset& d) {
  std::ostringstream os;
  d.write_csv(os);
  return os.str();
}

int sweep_with_designs(const Options& o, wpt::SweepSpec spec, bool need_network) {
  const auto base = load(o);
  std::vector<double> designs = o.design_cm;
  if (designs.empty() && need_network) designs = {20.0};
  int failures = 0;
  if (designs.empty()) {
    const auto ds = wpt::run_sweep(spec, base);
    failures += ds.failures;
    emit(o, csv(ds));
  }
  for (double cm : designs) {
    spec.network_design_m = cm / 100.0;
    const auto cfg = wpt::with_static_network(base, cm / 100.0);
    const auto ds = wpt::run_sweep(spec, cfg);
    failures += ds.failures;
    emit(o, csv(ds), suffix_for(cm, designs.size()));
  }
  return failures ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant inductive link simulator"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON config (defaults to the built-in prototype)");
  app.add_option("--out", o.out_path, "Output path (stdout when omitted)");
  app.add_option("--threads", o.threads, "Worker threads (0: all cores)");

  double d_min_cm = 5, d_max_cm = 100, f_min_mhz = 34, f_max_mhz = 42;
  int f_points = 161;
  auto* s2d = app.add_subcommand("sweep2d", "Efficiency over distance x frequency, fixed networks");
  s2d->add_option("--network-design-cm", o.design_cm, "Design distance(s) for the static networks");
  s2d->add_option("--points", o.points, "Distance steps")->check(CLI::Range(2, 100000));
  s2d->add_option("--f-points", f_points, "Frequency steps")->check(CLI::Range(2, 100000));
  s2d->add_option("--d-min-cm", d_min_cm);
  s2d->add_option("--d-max-cm", d_max_cm);
  s2d->add_option("--f-min-mhz", f_min_mhz);
  s2d->add_option("--f-max-mhz", f_max_mhz);

  auto* sd = app.add_subcommand("sweep-distance", "Tuned efficiency versus coaxial distance");
  sd->add_option("--network-design-cm", o.design_cm, "Design distance(s) for fixed/freq strategies");
  sd->add_option("--strategy", o.strategy, "fixed | freq | imp")
      ->check(CLI::IsMember({"fixed", "freq", "imp"}));
  sd->add_option("--points", o.points, "Distance steps")->check(CLI::Range(2, 100000));
  sd->add_option("--d-min-cm", d_min_cm);
  sd->add_option("--d-max-cm", d_max_cm);

  std::string mis_mode = "lateral";
  std::vector<double> mis_d_cm = {20, 35, 50};
  double mis_max = -1;
  auto* mis = app.add_subcommand("misalign", "Fixed versus impedance-tuned efficiency under misalignment");
  mis->add_option("--mode", mis_mode, "lateral | angular")->check(CLI::IsMember({"lateral", "angular"}));
  mis->add_option("--network-design-cm", mis_d_cm, "Fixed distances (networks designed there)");
  mis->add_option("--points", o.points, "Offset steps")->check(CLI::Range(2, 100000));
  mis->add_option("--max", mis_max, "Largest offset (m for lateral, rad for angular)");

  auto* des = app.add_subcommand("design", "Static L-section designs and varactor biases");
  des->add_option("--network-design-cm", o.design_cm, "Design distance(s)");

  std::vector<double> cap_pf;
  int pairs = 3;
  auto* vb = app.add_subcommand("varactor-bias", "Reverse bias for target stack capacitances");
  vb->add_option("--capacitance-pf", cap_pf, "Target capacitance(s)")->required();
  vb->add_option("--pairs", pairs, "Anti-series pairs in the stack")->check(CLI::PositiveNumber);

  bool no_calibrate = false;
  auto* tab = app.add_subcommand("tables", "Port-impedance and plateau tables against reference values");
  tab->add_flag("--no-calibrate", no_calibrate, "Keep the configured feed eps_eff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*s2d) {
      wpt::SweepSpec spec;
      spec.kind = wpt::SweepKind::Grid2d;
      spec.distance = {d_min_cm / 100, d_max_cm / 100, o.points ? o.points : 96};
      spec.frequency = {f_min_mhz * 1e6, f_max_mhz * 1e6, f_points};
      spec.threads = o.threads;
      return sweep_with_designs(o, spec, true);
    }
    if (*sd) {
      wpt::SweepSpec spec;
      spec.kind = wpt::SweepKind::Distance;
      spec.strategy = wpt::parse_strategy(o.strategy);
      spec.distance = {d_min_cm / 100, d_max_cm / 100, o.points ? o.points : 96};
      spec.threads = o.threads;
      return sweep_with_designs(o, spec, spec.strategy != wpt::TuneStrategy::Impedance);
    }
    if (*mis) {
      const auto base = load(o);
      const auto mode = mis_mode == "lateral" ? wpt::MisalignMode::Lateral : wpt::MisalignMode::Angular;
      const double hi = mis_max > 0 ? mis_max : (mode == wpt::MisalignMode::Lateral ? 0.2 : 1.2);
      const wpt::Range offsets{0.0, hi, o.points ? o.points : 21};
      int failures = 0;
      for (double cm : mis_d_cm) {
        const auto ds = wpt::misalign_study(base, mode, cm / 100, offsets, o.threads);
        failures += ds.failures;
        emit(o, csv(ds), suffix_for(cm, mis_d_cm.size()));
      }
      return failures ? kExitPartial : kExitOk;
    }
    if (*des) {
      const auto cfg = load(o);
      const double w = wpt::omega_of(cfg.nominal_frequency_hz);
      std::vector<double> designs = o.design_cm.empty() ? std::vector<double>{20, 35, 50} : o.design_cm;
      nlohmann::json out = nlohmann::json::array();
      for (double cm : designs) {
        nlohmann::json row;
        row["d_design_m"] = cm / 100;
        const auto dsn = wpt::design_static_network(cfg, cm / 100, w);
        row["m12_h"] = dsn.m12;
        row["z_source_port_ohm"] = {dsn.z_source_port.real(), dsn.z_source_port.imag()};
        row["z_load_port_ohm"] = {dsn.z_load_port.real(), dsn.z_load_port.imag()};
        row["source"] = {{"c_series_farad", dsn.source.c_series}, {"c_shunt_farad", dsn.source.c_shunt},
                         {"orientation", wpt::to_string(dsn.source.orientation)}};
        row["load"] = {{"c_series_farad", dsn.load.c_series}, {"c_shunt_farad", dsn.load.c_shunt},
                       {"orientation", wpt::to_string(dsn.load.orientation)}};
        if (cfg.source_tunable && cfg.load_tunable) {
          try {
            const auto bs = wpt::bias_for(*cfg.source_tunable, dsn.source);
            const auto bl = wpt::bias_for(*cfg.load_tunable, dsn.load);
            row["bias_v"] = {{"source_series", bs.series_v}, {"source_shunt", bs.shunt_v},
                             {"load_series", bl.series_v}, {"load_shunt", bl.shunt_v}};
          } catch (const wpt::UntunableError& e) {
            row["bias_v"] = e.token();
          }
        }
        out.push_back(row);
      }
      emit(o, out.dump(2) + "\n");
      return kExitOk;
    }
    if (*vb) {
      const auto cfg = load(o);
      wpt::VaractorStack stack = cfg.source_tunable->series;
      stack.n_pairs = pairs;
      const auto band = wpt::stack_band(stack);
      std::ostringstream os;
      os << "# diode: " << stack.diode.name << ", pairs: " << pairs << ", band_pf: ["
         << wpt::format_number(band.c_min * 1e12) << ", " << wpt::format_number(band.c_max * 1e12)
         << "]\ncapacitance_pf,bias_v\n";
      int failures = 0;
      for (double c : cap_pf) {
        os << wpt::format_number(c) << ",";
        try {
          os << wpt::format_number(wpt::bias_for_capacitance(stack, c * 1e-12)) << "\n";
        } catch (const wpt::UntunableError& e) {
          ++failures;
          os << e.token() << "\n";
        }
      }
      emit(o, os.str());
      return failures ? kExitPartial : kExitOk;
    }
    if (*tab) {
      const auto report = wpt::report_tables(load(o), !no_calibrate, o.threads);
      std::cout << report.text;
      if (!o.out_path.empty()) emit(o, report.json + "\n");
      return kExitOk;
    }
  } catch (const wpt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const wpt::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
