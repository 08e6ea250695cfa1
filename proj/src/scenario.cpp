#include "wsscatter/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace wss {

std::map<std::string, double> default_tolerances() {
  return {
      {"profile_l2", 1e-4},        {"profile_l4", 1e-3},      {"a1_scaling", 1e-3},
      {"r2_relative", 1e-3},       {"r1_exponent", 0.1},      {"r1_identity", 1e-4},
      {"l2_drift", 1e-6},          {"energy_drift", 1e-4},    {"v_decay", 0.35},
      {"b_decay", 0.6},            {"t0_decay", 0.3},         {"strichartz_unitary", 1e-12},
      {"strichartz_growth", 0.2},  {"wave_energy_ratio", 1.05}, {"free_wave_sup", 0.15},
      {"free_wave_l2", 0.05},      {"dyadic_constant", 1e-12}, {"order", 0.25},
  };
}

namespace {

// collects problems instead of stopping at the first
struct Reader {
  std::vector<std::string>& errs;

  static std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.line >= 0 ? "line " + std::to_string(m.line + 1) + ": " : "";
  }

  void keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& path) {
    if (!n.IsMap()) {
      errs.push_back(where(n) + path + ": expected a table");
      return;
    }
    for (const auto& kv : n) {
      const auto k = kv.first.as<std::string>();
      if (!allowed.count(k)) errs.push_back(where(kv.first) + (path.empty() ? k : path + "." + k) + ": unknown key");
    }
  }

  template <class T>
  void get(const YAML::Node& n, const std::string& key, T& out, const std::string& path) {
    if (!n.IsMap() || !n[key]) return;
    const YAML::Node v = n[key];
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      errs.push_back(where(v) + path + "." + key + ": wrong type");
    }
  }

  void vec3(const YAML::Node& n, const std::string& key, std::array<double, 3>& out, const std::string& path) {
    std::vector<double> v;
    if (!n.IsMap() || !n[key]) return;
    get(n, key, v, path);
    if (v.size() != 3) {
      errs.push_back(where(n[key]) + path + "." + key + ": expected three numbers");
      return;
    }
    out = {v[0], v[1], v[2]};
  }
};

void read_grid(Reader& r, const YAML::Node& n, GridSpec& g, const std::string& path) {
  r.keys(n, {"n_per_axis", "box_length"}, path);
  r.get(n, "n_per_axis", g.n_per_axis, path);
  r.get(n, "box_length", g.box_length, path);
}

void read_field(Reader& r, const YAML::Node& n, FieldSpec& f, const std::string& path) {
  r.keys(n, {"kind", "amplitude", "width", "center"}, path);
  r.get(n, "kind", f.kind, path);
  r.get(n, "amplitude", f.amplitude, path);
  r.get(n, "width", f.width, path);
  r.vec3(n, "center", f.center, path);
}

bool pow2(int n) { return n >= 8 && (n & (n - 1)) == 0; }

std::string num(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::string msg = origin + ": line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg;
    throw ScenarioError("scenario parse error", {msg});
  }
  Scenario s;
  s.source = origin;
  s.tolerances = default_tolerances();
  std::vector<std::string> errs;
  Reader r{errs};
  if (!root.IsMap()) throw ScenarioError("scenario parse error", {origin + ": top level must be a table"});

  r.keys(root, {"version", "name", "grid", "profile_grid", "state", "times", "quadrature", "solver", "checks",
                "tolerances", "outputs"},
         "");
  r.get(root, "version", s.version, "");
  r.get(root, "name", s.name, "");
  if (root["grid"]) read_grid(r, root["grid"], s.grid, "grid");
  if (root["profile_grid"]) read_grid(r, root["profile_grid"], s.profile_grid, "profile_grid");

  if (const auto st = root["state"]) {
    r.keys(st, {"w_plus", "a_plus", "a_dot_plus", "support_threshold"}, "state");
    if (const auto w = st["w_plus"]) {
      r.keys(w, {"kind", "amplitude", "width", "coefficients", "center"}, "state.w_plus");
      r.get(w, "kind", s.w_plus.kind, "state.w_plus");
      r.get(w, "amplitude", s.w_plus.amplitude, "state.w_plus");
      r.get(w, "width", s.w_plus.width, "state.w_plus");
      r.get(w, "coefficients", s.w_plus.coefficients, "state.w_plus");
      r.vec3(w, "center", s.w_plus.center, "state.w_plus");
    }
    if (st["a_plus"]) read_field(r, st["a_plus"], s.a_plus, "state.a_plus");
    if (st["a_dot_plus"]) read_field(r, st["a_dot_plus"], s.a_dot_plus, "state.a_dot_plus");
    r.get(st, "support_threshold", s.support_threshold, "state");
  }
  if (const auto t = root["times"]) {
    r.keys(t, {"T", "t0_list", "t_max", "per_octave", "fit_from", "r2_times", "profile_times"}, "times");
    r.get(t, "T", s.T, "times");
    r.get(t, "t0_list", s.t0_list, "times");
    r.get(t, "t_max", s.t_max, "times");
    r.get(t, "per_octave", s.per_octave, "times");
    r.get(t, "fit_from", s.fit_from, "times");
    r.get(t, "r2_times", s.r2_times, "times");
    r.get(t, "profile_times", s.profile_times, "times");
  }
  if (const auto q = root["quadrature"]) {
    r.keys(q, {"nu_max", "node_count"}, "quadrature");
    r.get(q, "nu_max", s.nu_max, "quadrature");
    r.get(q, "node_count", s.node_count, "quadrature");
  }
  if (const auto v = root["solver"]) {
    r.keys(v, {"geometry", "radial_points", "radial_radius", "kappa", "dt_max"}, "solver");
    r.get(v, "geometry", s.solver.geometry, "solver");
    r.get(v, "radial_points", s.solver.radial_points, "solver");
    r.get(v, "radial_radius", s.solver.radial_radius, "solver");
    r.get(v, "kappa", s.solver.kappa, "solver");
    r.get(v, "dt_max", s.solver.dt_max, "solver");
  }
  if (const auto c = root["checks"]) {
    r.keys(c, {"strichartz_packets", "seed"}, "checks");
    r.get(c, "strichartz_packets", s.strichartz_packets, "checks");
    r.get(c, "seed", s.seed, "checks");
  }
  if (const auto tol = root["tolerances"]) {
    if (!tol.IsMap()) {
      errs.push_back(Reader::where(tol) + "tolerances: expected a table");
    } else {
      for (const auto& kv : tol) {
        const auto k = kv.first.as<std::string>();
        if (!s.tolerances.count(k)) {
          errs.push_back(Reader::where(kv.first) + "tolerances." + k + ": unknown tolerance");
          continue;
        }
        r.get(tol, k, s.tolerances[k], "tolerances");
      }
    }
  }
  if (const auto o = root["outputs"]) {
    r.keys(o, {"directory", "formats"}, "outputs");
    r.get(o, "directory", s.out_dir, "outputs");
    r.get(o, "formats", s.formats, "outputs");
  }

  // value checks run on whatever parsed, so one pass reports everything
  try {
    for (auto& v : validate_scenario(s)) errs.push_back(std::move(v));
  } catch (const std::exception& x) {
    errs.push_back(std::string("validation stopped: ") + x.what());
  }
  if (!errs.empty()) {
    for (auto& e : errs) e = origin + ": " + e;
    throw ScenarioError("invalid scenario (" + std::to_string(errs.size()) + " problem(s))", errs);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ScenarioNotFound("scenario file not found: " + path);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> e;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) e.push_back(msg);
  };
  need(s.version == 1, "version: only version 1 is understood");
  for (auto [g, name] : {std::pair{&s.grid, "grid"}, std::pair{&s.profile_grid, "profile_grid"}}) {
    need(pow2(g->n_per_axis), std::string(name) + ".n_per_axis: must be a power of two >= 8");
    need(g->box_length > 0, std::string(name) + ".box_length: must be > 0");
  }
  need(s.w_plus.kind == "hermite_gaussian", "state.w_plus.kind: only 'hermite_gaussian' is supported");
  need(s.w_plus.amplitude >= 0, "state.w_plus.amplitude: must be >= 0");
  need(s.w_plus.width > 0, "state.w_plus.width: must be > 0");
  need(!s.w_plus.coefficients.empty(), "state.w_plus.coefficients: must not be empty");
  need(s.w_plus.center == std::array<double, 3>{0, 0, 0}, "state.w_plus.center: must be the origin (centred profiles only)");
  for (auto [f, name] : {std::pair{&s.a_plus, "state.a_plus"}, std::pair{&s.a_dot_plus, "state.a_dot_plus"}}) {
    need(f->kind == "gaussian" || f->kind == "zero", std::string(name) + ".kind: must be 'gaussian' or 'zero'");
    need(f->width > 0, std::string(name) + ".width: must be > 0");
  }
  need(s.a_plus.center == s.a_dot_plus.center || s.a_dot_plus.kind == "zero" || s.a_plus.kind == "zero",
       "state.a_dot_plus.center: must equal state.a_plus.center");
  need(s.support_threshold > 0 && s.support_threshold < 1, "state.support_threshold: must be in (0, 1)");

  need(s.T >= 1, "times.T: must be >= 1");
  need(s.t_max > s.T, "times.t_max: must be > T");
  need(!s.t0_list.empty(), "times.t0_list: must not be empty");
  for (std::size_t i = 0; i < s.t0_list.size(); ++i) {
    need(s.t0_list[i] > s.T && s.t0_list[i] <= s.t_max,
         "times.t0_list: " + num(s.t0_list[i]) + " must satisfy T < t0 <= t_max");
    if (i) need(s.t0_list[i] > s.t0_list[i - 1], "times.t0_list: must be strictly increasing");
  }
  need(s.per_octave >= 1, "times.per_octave: must be >= 1");
  need(s.fit_from >= s.T && s.fit_from < s.t_max, "times.fit_from: must satisfy T <= fit_from < t_max");
  for (double t : s.r2_times) need(t >= 1 && t <= s.t_max, "times.r2_times: " + num(t) + " outside [1, t_max]");
  for (double t : s.profile_times)
    need(t >= 1 && t <= s.t_max, "times.profile_times: " + num(t) + " outside [1, t_max]");
  need(s.nu_max > 0, "quadrature.nu_max: must be > 0");
  need(s.node_count >= 8, "quadrature.node_count: must be >= 8");
  need(s.solver.geometry == "auto" || s.solver.geometry == "radial" || s.solver.geometry == "grid",
       "solver.geometry: must be auto, radial or grid");
  need(s.solver.radial_points >= 8, "solver.radial_points: must be >= 8");
  need(s.solver.radial_radius > 0, "solver.radial_radius: must be > 0");
  need(s.solver.kappa > 0, "solver.kappa: must be > 0");
  need(s.solver.dt_max > 0, "solver.dt_max: must be > 0");
  need(s.strichartz_packets >= 1, "checks.strichartz_packets: must be >= 1");
  for (const auto& [k, v] : s.tolerances) need(v > 0, "tolerances." + k + ": must be > 0");
  for (const auto& f : s.formats) need(f == "csv" || f == "json", "outputs.formats: unknown format '" + f + "'");

  // domains must hold u_a where it is evaluated
  if (s.w_plus.width > 0 && !s.w_plus.coefficients.empty() && s.w_plus.amplitude > 0 && s.support_threshold > 0 &&
      s.support_threshold < 1) {
    const double sr = scenario_profile(s).support_radius(s.support_threshold);
    double tg = 0;
    for (double t : s.r2_times) tg = std::max(tg, t);
    need(s.grid.box_length >= 2 * tg * sr,
         "grid.box_length: violates box_length >= 2 * max(r2_times) * support_radius(w_plus) = " + num(2 * tg * sr));
    need(s.solver.radial_radius >= s.t_max * sr,
         "solver.radial_radius: violates radial_radius >= t_max * support_radius(w_plus) = " + num(s.t_max * sr));
  }
  return e;
}

RadialProfile scenario_profile(const Scenario& s) {
  return RadialProfile::hermite_gaussian(s.w_plus.amplitude, s.w_plus.width, s.w_plus.coefficients);
}

RadialFreeWave scenario_free_wave(const Scenario& s) {
  auto gp = [](const FieldSpec& f) {
    return f.kind == "zero" || f.amplitude == 0 ? GaussPoly() : GaussPoly({f.amplitude}, 0.5 / (f.width * f.width));
  };
  const auto& c = s.a_plus.kind != "zero" ? s.a_plus.center : s.a_dot_plus.center;
  return RadialFreeWave(gp(s.a_plus), gp(s.a_dot_plus), c);
}

ProfileBundle build_scenario_bundle(const Scenario& s) {
  const Grid prof(s.profile_grid.n_per_axis, s.profile_grid.box_length);
  const Grid phys(s.grid.n_per_axis, s.grid.box_length);
  auto st = make_state(prof, phys, scenario_profile(s), scenario_free_wave(s));
  // the radial solver samples A1~ out to R / T
  const double r_max = std::max(s.solver.radial_radius / s.T * 1.02, 0.0);
  return build_bundle(st, s.nu_max, s.node_count, true, r_max);
}

}  // namespace wss
