#include "wpt/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wpt/errors.hpp"

namespace wpt {

using nlohmann::json;

namespace {

// Field access with path tracking and unknown-key rejection.
class Node {
 public:
  Node(const json& j, std::string path, const std::string& origin)
      : j_(j), path_(std::move(path)), origin_(origin) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(origin_ + ": " + (path_.empty() ? "/" : path_) + ": " + what);
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number()) child_fail(key, "expected a number");
    out = v.get<double>();
  }

  void integer(const char* key, int& out) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) child_fail(key, "expected an integer");
    out = v.get<int>();
  }

  void text(const char* key, std::string& out) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_string()) child_fail(key, "expected a string");
    out = v.get<std::string>();
  }

  Node child(const char* key) { return Node(j_.at(key), path_ + "/" + key, origin_); }

  [[noreturn]] void child_fail(const char* key, const std::string& what) const {
    throw ConfigError(origin_ + ": " + path_ + "/" + key + ": " + what);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) child_fail(it.key().c_str(), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& origin_;
  std::set<std::string> seen_;
};

void read_loop(Node n, LoopSpec& loop) {
  n.number("r_ohm", loop.res.r);
  n.number("l_henry", loop.res.l);
  n.number("c_farad", loop.res.c);
  n.number("radius_m", loop.geom.radius);
  n.number("feed_length_m", loop.geom.feed_length);
  n.number("feed_z0_ohm", loop.geom.feed_z0);
  n.number("feed_eps_eff", loop.geom.feed_eps_eff);
  n.finish();
}

LOrientation read_orientation(const std::string& s, Node& n, const char* key) {
  if (s == to_string(LOrientation::SeriesAtReference)) return LOrientation::SeriesAtReference;
  if (s == to_string(LOrientation::ShuntAtReference)) return LOrientation::ShuntAtReference;
  n.child_fail(key, "expected series_at_reference or shunt_at_reference");
}

void read_diode(Node n, VaractorDiode& d) {
  n.text("name", d.name);
  n.number("c_j0_farad", d.c_j0);
  n.number("v_j_volt", d.v_j);
  n.number("grading", d.grading);
  n.number("c_pkg_farad", d.c_pkg);
  n.number("b_v_volt", d.b_v);
  n.number("v_r_max_volt", d.v_r_max);
  n.finish();
}

void read_stack(Node n, VaractorStack& s) {
  n.integer("n_pairs", s.n_pairs);
  if (n.has("diode")) read_diode(n.child("diode"), s.diode);
  n.finish();
}

void read_tunable(Node n, TunableLSection& t) {
  if (n.has("series")) read_stack(n.child("series"), t.series);
  if (n.has("shunt")) read_stack(n.child("shunt"), t.shunt);
  std::string o;
  n.text("orientation", o);
  if (!o.empty()) t.orientation = read_orientation(o, n, "orientation");
  n.finish();
}

void read_fixed(Node n, LSection& ls, LOrientation orientation) {
  ls.orientation = orientation;
  n.number("c_series_farad", ls.c_series);
  n.number("c_shunt_farad", ls.c_shunt);
  std::string o;
  n.text("orientation", o);
  if (!o.empty()) ls.orientation = read_orientation(o, n, "orientation");
  n.finish();
}

template <typename F>
void guarded(const std::string& origin, const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(origin + ": " + path + ": " + e.what());
  }
}

json diode_json(const VaractorDiode& d) {
  return {{"name", d.name},       {"c_j0_farad", d.c_j0},  {"v_j_volt", d.v_j},
          {"grading", d.grading}, {"c_pkg_farad", d.c_pkg}, {"b_v_volt", d.b_v},
          {"v_r_max_volt", d.v_r_max}};
}

json tunable_json(const TunableLSection& t) {
  return {{"series", {{"n_pairs", t.series.n_pairs}, {"diode", diode_json(t.series.diode)}}},
          {"shunt", {{"n_pairs", t.shunt.n_pairs}, {"diode", diode_json(t.shunt.diode)}}},
          {"orientation", to_string(t.orientation)}};
}

json loop_json(const LoopSpec& l) {
  return {{"r_ohm", l.res.r},
          {"l_henry", l.res.l},
          {"c_farad", l.res.c},
          {"radius_m", l.geom.radius},
          {"feed_length_m", l.geom.feed_length},
          {"feed_z0_ohm", l.geom.feed_z0},
          {"feed_eps_eff", l.geom.feed_eps_eff}};
}

}  // namespace

SystemConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < end; ++i) line += text[i] == '\n';
    throw ConfigError(origin + ":" + std::to_string(line) + ": JSON syntax error: " + e.what());
  }

  SystemConfig cfg = default_system();
  Node n(root, "", origin);
  if (n.has("loop1")) read_loop(n.child("loop1"), cfg.loop1);
  if (n.has("loop2")) read_loop(n.child("loop2"), cfg.loop2);
  if (n.has("placement")) {
    Node p = n.child("placement");
    p.number("d_m", cfg.placement.d);
    p.number("c_m", cfg.placement.c);
    p.number("theta_rad", cfg.placement.theta);
    p.finish();
  }
  if (n.has("terminations")) {
    Node t = n.child("terminations");
    t.number("z_source_ohm", cfg.z_source);
    t.number("z_load_ohm", cfg.z_load);
    t.finish();
  }
  n.number("nominal_frequency_hz", cfg.nominal_frequency_hz);
  std::string orientation;
  n.text("network_orientation", orientation);
  if (!orientation.empty()) cfg.orientation = read_orientation(orientation, n, "network_orientation");
  if (n.has("varactor_networks")) {
    Node v = n.child("varactor_networks");
    if (v.has("source")) read_tunable(v.child("source"), *cfg.source_tunable);
    if (v.has("load")) read_tunable(v.child("load"), *cfg.load_tunable);
    v.finish();
  }
  if (n.has("fixed_networks")) {
    Node f = n.child("fixed_networks");
    if (f.has("source")) read_fixed(f.child("source"), cfg.source_network.emplace(), cfg.orientation);
    if (f.has("load")) read_fixed(f.child("load"), cfg.load_network.emplace(), cfg.orientation);
    f.finish();
  }
  if (n.has("solver")) {
    Node s = n.child("solver");
    s.number("freq_tune_tol_hz", cfg.freq_tune_tol_hz);
    s.integer("freq_scan_points", cfg.freq_scan_points);
    s.integer("quadrature_initial_points", cfg.quadrature.initial_points);
    s.integer("quadrature_max_points", cfg.quadrature.max_points);
    s.number("quadrature_rel_tol", cfg.quadrature.rel_tol);
    s.finish();
  }
  n.finish();

  guarded(origin, "/loop1", [&] { validate(cfg.loop1.res); validate(cfg.loop1.geom); });
  guarded(origin, "/loop2", [&] { validate(cfg.loop2.res); validate(cfg.loop2.geom); });
  guarded(origin, "/placement", [&] { validate(cfg.placement); });
  guarded(origin, "/varactor_networks/source", [&] { validate(*cfg.source_tunable); });
  guarded(origin, "/varactor_networks/load", [&] { validate(*cfg.load_tunable); });
  guarded(origin, "/fixed_networks", [&] {
    if (cfg.source_network) validate(*cfg.source_network);
    if (cfg.load_network) validate(*cfg.load_network);
  });
  if (cfg.quadrature.initial_points < 4 || cfg.quadrature.max_points < cfg.quadrature.initial_points ||
      !(cfg.quadrature.rel_tol > 0)) {
    throw ConfigError(origin + ": /solver: quadrature settings inconsistent");
  }
  guarded(origin, "", [&] { validate(cfg); });
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string dump_config(const SystemConfig& cfg) {
  json j;
  j["loop1"] = loop_json(cfg.loop1);
  j["loop2"] = loop_json(cfg.loop2);
  j["placement"] = {{"d_m", cfg.placement.d}, {"c_m", cfg.placement.c},
                    {"theta_rad", cfg.placement.theta}};
  j["terminations"] = {{"z_source_ohm", cfg.z_source}, {"z_load_ohm", cfg.z_load}};
  j["nominal_frequency_hz"] = cfg.nominal_frequency_hz;
  j["network_orientation"] = to_string(cfg.orientation);
  if (cfg.source_tunable && cfg.load_tunable) {
    j["varactor_networks"] = {{"source", tunable_json(*cfg.source_tunable)},
                              {"load", tunable_json(*cfg.load_tunable)}};
  }
  if (cfg.source_network || cfg.load_network) {
    json f = json::object();
    auto put = [&](const char* key, const std::optional<LSection>& ls) {
      if (ls) {
        f[key] = {{"c_series_farad", ls->c_series},
                  {"c_shunt_farad", ls->c_shunt},
                  {"orientation", to_string(ls->orientation)}};
      }
    };
    put("source", cfg.source_network);
    put("load", cfg.load_network);
    j["fixed_networks"] = f;
  }
  j["solver"] = {{"freq_tune_tol_hz", cfg.freq_tune_tol_hz},
                 {"freq_scan_points", cfg.freq_scan_points},
                 {"quadrature_initial_points", cfg.quadrature.initial_points},
                 {"quadrature_max_points", cfg.quadrature.max_points},
                 {"quadrature_rel_tol", cfg.quadrature.rel_tol}};
  return j.dump(2);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const SystemConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(dump_config(cfg))));
  return buf;
}

}  // namespace wpt
