#include "phasegeo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "phasegeo/errors.hpp"
#include "phasegeo/geodesic.hpp"
#include "phasegeo/phasefield.hpp"
#include "phasegeo/profile.hpp"
#include "phasegeo/sharp_interface.hpp"

namespace phasegeo {

using json = nlohmann::json;
namespace fs = std::filesystem;

// --------------------------------------------------------------------------
// Small utilities

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const std::string& command, const json& config, std::uint64_t seed) {
  const json canon = {{"command", command}, {"config", config}, {"seed", seed}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(canon.dump()));
  return buf;
}

int default_threads() {
  if (const char* env = std::getenv("PHASEGEO_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<int>(n);
  }
  return 1;
}

int exit_code_of(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const json::exception*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const InfeasibleError*>(&e) || dynamic_cast<const GeometryError*>(&e)) return 4;
  return 3;
}

json RunManifest::to_json() const {
  return {{"command", command},   {"config_hash", config_hash}, {"version", version},
          {"seed", seed},         {"threads", threads},         {"started", started},
          {"finished", finished}, {"seconds", seconds},         {"files", files},
          {"status", status},     {"exit_code", exit_code},     {"error", error},
          {"timings", timings}};
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      out_ << (k ? "," : "") << format_double(values[k]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// Config access with schema diagnostics.

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return item.key() == a; })) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  return j.at(key);
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty number array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(where + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

State state_of(const json& j, const std::string& where) {
  const auto v = numbers(j, where);
  if (static_cast<int>(v.size()) > kMaxStateDim) throw ConfigError(where + ": state too long");
  State s(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) s(k) = v[k];
  return s;
}

Point point_of(const json& j, const std::string& where) {
  const auto v = numbers(j, where);
  if (static_cast<int>(v.size()) > kMaxSpaceDim) throw ConfigError(where + ": point too long");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) p(k) = v[k];
  return p;
}

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + ": '" + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

// Well labels are 1-based in configs.
int label(const json& j, const char* key, int fallback, const std::string& where) {
  const int l = integer(j, key, fallback + 1, where);
  if (l < 1) throw ConfigError(where + ": labels start at 1");
  return l - 1;
}

GeodesicConfig geodesic_config(const json& j, const std::string& where) {
  GeodesicConfig c;
  if (j.is_null()) return c;
  check_keys(j, {"nodes", "max_iterations", "gradient_tolerance", "redistribute_every",
                 "via_well_inits", "verbose"},
             where);
  c.nodes = integer(j, "nodes", c.nodes, where);
  c.max_iterations = integer(j, "max_iterations", c.max_iterations, where);
  c.gradient_tolerance = number(j, "gradient_tolerance", c.gradient_tolerance, where);
  c.redistribute_every = integer(j, "redistribute_every", c.redistribute_every, where);
  c.via_well_inits = boolean(j, "via_well_inits", c.via_well_inits, where);
  c.verbose = boolean(j, "verbose", c.verbose, where);
  return c;
}

json state_json(const State& s) { return std::vector<double>(s.data(), s.data() + s.size()); }

struct Context {
  fs::path out;
  std::uint64_t seed = 0;
  int threads = 1;
  RunManifest* manifest = nullptr;
};

// --------------------------------------------------------------------------
// Commands

void cmd_geodesic(const json& cfg, Context& ctx) {
  const std::string w = "geodesic";
  check_keys(cfg, {"potential", "x", "p", "q", "region", "geodesic"}, w);
  const auto pot = potential_from_config(need(cfg, "potential", w));
  const State p = state_of(need(cfg, "p", w), w + ".p");
  const State q = state_of(need(cfg, "q", w), w + ".q");
  const GeodesicConfig gc = geodesic_config(cfg.value("geodesic", json()), w + ".geodesic");
  GeodesicResult r;
  if (cfg.contains("region")) {
    const json& reg = cfg.at("region");
    check_keys(reg, {"lo", "hi", "samples_per_axis"}, w + ".region");
    const Box box(point_of(need(reg, "lo", w), w + ".region.lo"),
                  point_of(need(reg, "hi", w), w + ".region.hi"));
    r = region_distance(pot, box, p, q, gc, integer(reg, "samples_per_axis", 9, w));
  } else {
    r = geodesic_distance(pot, point_of(need(cfg, "x", w), w + ".x"), p, q, gc);
  }
  json nodes = json::array();
  for (const auto& n : r.curve.nodes) nodes.push_back(state_json(n));
  json out = {{"cost", r.cost},           {"length", r.length},       {"iterations", r.iterations},
              {"winner", r.winner},       {"converged", r.converged}, {"initial_costs", r.initial_costs},
              {"nodes", nodes}};
  if (gc.verbose) {
    json cands = json::array();
    for (const auto& c : r.candidates) {
      cands.push_back({{"init", c.init},
                       {"initial_cost", c.initial_cost},
                       {"cost", c.cost},
                       {"length", c.length},
                       {"iterations", c.iterations},
                       {"converged", c.converged}});
    }
    out["candidates"] = cands;
  }
  write_json(ctx.out / "geodesic.json", out);
  std::vector<std::string> header = {"index", "arclength"};
  for (int c = 0; c < p.size(); ++c) header.push_back("z" + std::to_string(c + 1));
  CsvWriter csv(ctx.out / "curve.csv", header);
  double arc = 0.0;
  for (std::size_t k = 0; k < r.curve.nodes.size(); ++k) {
    if (k > 0) arc += (r.curve.nodes[k] - r.curve.nodes[k - 1]).norm();
    std::vector<double> row = {double(k), arc};
    for (int c = 0; c < p.size(); ++c) row.push_back(r.curve.nodes[k](c));
    csv.row(row);
  }
}

void cmd_profile(const json& cfg, Context& ctx) {
  const std::string w = "profile";
  check_keys(cfg, {"potential", "x", "p", "q", "curve", "epsilon", "lambda", "quadrature_nodes",
                   "samples", "geodesic"},
             w);
  const auto pot = potential_from_config(need(cfg, "potential", w));
  const Point x = point_of(need(cfg, "x", w), w + ".x");
  const double eps = number(cfg, "epsilon", 0.0, w);
  if (!cfg.contains("epsilon")) throw ConfigError(w + ": missing required key 'epsilon'");
  const double lam = cfg.contains("lambda") ? number(cfg, "lambda", 0.0, w) : default_lambda(eps);
  Curve curve;
  double geodesic_cost = std::numeric_limits<double>::quiet_NaN();
  if (cfg.contains("curve")) {
    for (const auto& n : cfg.at("curve")) curve.nodes.push_back(state_of(n, w + ".curve"));
  } else {
    const GeodesicConfig gc = geodesic_config(cfg.value("geodesic", json()), w + ".geodesic");
    const auto r = geodesic_distance(pot, x, state_of(need(cfg, "p", w), w + ".p"),
                                     state_of(need(cfg, "q", w), w + ".q"), gc);
    curve = r.curve;
    geodesic_cost = r.cost;
  }
  const auto prof = build_profile(pot, x, curve, eps, lam, integer(cfg, "quadrature_nodes", 1000, w));
  const int samples = integer(cfg, "samples", 400, w);
  if (samples < 2) throw ConfigError(w + ": samples must be at least 2");
  const int m = pot->state_dim();
  std::vector<std::string> header = {"t", "g"};
  for (int c = 0; c < m; ++c) header.push_back("u" + std::to_string(c + 1));
  header.push_back("integrand");
  CsvWriter csv(ctx.out / "profile.csv", header);
  for (int k = 0; k < samples; ++k) {
    const double t = prof.tau() * k / (samples - 1);
    std::vector<double> row = {t, prof.g(t)};
    const State u = prof.u(t);
    for (int c = 0; c < m; ++c) row.push_back(u(c));
    row.push_back(prof.integrand(t));
    csv.row(row);
  }
  write_json(ctx.out / "profile.json",
             {{"epsilon", eps},
              {"lambda", lam},
              {"tau", prof.tau()},
              {"width_bound", eps / std::sqrt(lam) * prof.curve_length()},
              {"curve_length", prof.curve_length()},
              {"energy", profile_energy(prof)},
              {"reparametrized_cost", reparametrized_cost(prof)},
              {"interpolant_cost", interpolant_cost(prof)},
              {"ode_residual", ode_residual(prof)},
              {"geodesic_cost", std::isnan(geodesic_cost) ? json() : json(geodesic_cost)}});
}

SweepScenario scenario_of(const json& j, const MultiWellPotential& pot, const std::string& w) {
  SweepScenario s;
  if (j.is_null()) return s;
  check_keys(j, {"name", "constraint", "mass", "dirichlet", "left", "right", "position", "radius",
                 "h_over_eps", "warm_start", "minimize"},
             w);
  s.name = j.value("name", std::string());
  const std::string c = j.value("constraint", std::string("mass"));
  if (c == "mass") {
    s.constraint = ConstraintKind::mass;
  } else if (c == "none") {
    s.constraint = ConstraintKind::none;
  } else if (c == "dirichlet") {
    s.constraint = ConstraintKind::dirichlet;
  } else {
    throw ConfigError(w + ": constraint must be mass, none or dirichlet");
  }
  if (j.contains("mass")) s.mass = state_of(j.at("mass"), w + ".mass");
  if (s.constraint == ConstraintKind::dirichlet) {
    const json& d = need(j, "dirichlet", w);
    check_keys(d, {"left", "right", "value"}, w + ".dirichlet");
    if (d.contains("value")) {
      const State v = state_of(d.at("value"), w + ".dirichlet.value");
      s.dirichlet = [v](const Point&) { return v; };
    } else {
      const State l = state_of(need(d, "left", w), w + ".dirichlet.left");
      const State r = state_of(need(d, "right", w), w + ".dirichlet.right");
      const double mid = pot.domain().center()(0);
      s.dirichlet = [l, r, mid](const Point& x) { return x(0) < mid ? l : r; };
    }
  }
  s.left = label(j, "left", 0, w);
  s.right = label(j, "right", 1, w);
  s.position = number(j, "position", pot.domain().center()(0), w);
  s.radius = number(j, "radius", 0.0, w);
  s.h_over_eps = number(j, "h_over_eps", s.h_over_eps, w);
  s.warm_start = boolean(j, "warm_start", true, w);
  if (j.contains("minimize")) {
    const json& m = j.at("minimize");
    check_keys(m, {"max_iterations", "tolerance", "dt"}, w + ".minimize");
    s.minimize.max_iterations = integer(m, "max_iterations", s.minimize.max_iterations, w);
    s.minimize.tolerance = number(m, "tolerance", s.minimize.tolerance, w);
    s.minimize.dt = number(m, "dt", 0.0, w);
  }
  s.minimize.record_trace = false;
  return s;
}

void write_field(const fs::path& path, const Field& f) {
  std::vector<std::string> header = {"x"};
  if (f.grid.dim() == 2) header.push_back("y");
  for (int c = 0; c < f.state_dim(); ++c) header.push_back("u" + std::to_string(c + 1));
  CsvWriter csv(path, header);
  for (int k = 0; k < f.grid.size(); ++k) {
    const Point x = f.grid.point(k);
    std::vector<double> row(x.data(), x.data() + x.size());
    for (int c = 0; c < f.state_dim(); ++c) row.push_back(f.values(c, k));
    csv.row(row);
  }
}

void cmd_sweep(const json& cfg, Context& ctx, bool single) {
  const std::string w = single ? "minimize" : "sweep";
  check_keys(cfg, {"potential", single ? "epsilon" : "epsilons", "scenario"}, w);
  const auto pot = potential_from_config(need(cfg, "potential", w));
  const auto eps = numbers(need(cfg, single ? "epsilon" : "epsilons", w), w + ".epsilons");
  SweepScenario sc = scenario_of(cfg.value("scenario", json()), *pot, w + ".scenario");
  sc.threads = ctx.threads;
  const SweepRecord rec = epsilon_sweep(pot, sc, eps);
  json rows = json::array();
  for (const auto& r : rec.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"h", r.h},
                    {"energy", r.energy},
                    {"interface", r.interface},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"max_mass_error", r.max_mass_error},
                    {"seconds", r.seconds}});
    ctx.manifest->timings[format_double(r.epsilon)] = r.seconds;
  }
  write_field(ctx.out / "field.csv", rec.last);
  if (single) {
    const auto& r = rec.rows.front();
    json out = rows.front();
    out["gibbs_thomson"] = state_json(gibbs_thomson_estimate(*pot, rec.last, r.epsilon));
    write_json(ctx.out / "minimize.json", out);
    return;
  }
  // wall time stays out of the CSV so identical configs give identical bytes
  CsvWriter csv(ctx.out / "sweep.csv", {"epsilon", "h", "energy", "interface", "iterations",
                                        "converged", "max_mass_error"});
  for (const auto& r : rec.rows) {
    csv.row({r.epsilon, r.h, r.energy, r.interface, double(r.iterations), r.converged ? 1.0 : 0.0,
             r.max_mass_error});
  }
  write_json(ctx.out / "sweep.json", {{"rows", rows}, {"warm_start", sc.warm_start}});
}

void cmd_sharp(const json& cfg, Context& ctx) {
  const std::string w = "sharp";
  check_keys(cfg, {"potential", "jumps", "labels", "segments", "quadrature", "dirichlet",
                   "minimal_jump", "counterexample", "geodesic"},
             w);
  const auto pot = potential_from_config(need(cfg, "potential", w));
  const GeodesicConfig gc = geodesic_config(cfg.value("geodesic", json()), w + ".geodesic");
  json out = json::object();
  TensionCache cache(pot, gc);

  if (cfg.contains("labels")) {
    JumpConfiguration1D jc;
    if (cfg.contains("jumps") && !cfg.at("jumps").empty()) {
      jc.jumps = numbers(cfg.at("jumps"), w + ".jumps");
    }
    for (const auto& l : cfg.at("labels")) {
      if (!l.is_number_integer() || l.get<int>() < 1) throw ConfigError(w + ": labels start at 1");
      jc.labels.push_back(l.get<int>() - 1);
    }
    const auto r = F0_energy_1d(pot, jc, &cache);
    out["F0"] = r.total;
    out["parts"] = r.parts;
    if (cfg.contains("dirichlet")) {
      const json& d = cfg.at("dirichlet");
      check_keys(d, {"left", "right"}, w + ".dirichlet");
      const double e = dirichlet_energy_1d(pot, jc, state_of(need(d, "left", w), w),
                                           state_of(need(d, "right", w), w), gc);
      out["dirichlet_energy"] = e;
      out["boundary_penalty"] = e - r.total;
    }
  }
  if (cfg.contains("segments")) {
    InterfaceMesh2D mesh;
    for (const auto& s : cfg.at("segments")) {
      check_keys(s, {"a", "b", "left", "right"}, w + ".segments");
      mesh.segments.push_back({point_of(need(s, "a", w), w + ".a"), point_of(need(s, "b", w), w + ".b"),
                               label(s, "left", 0, w), label(s, "right", 1, w)});
    }
    const auto r = F0_energy_2d(pot, mesh, integer(cfg, "quadrature", 8, w), &cache, ctx.threads);
    out["F0"] = r.total;
    out["parts"] = r.parts;
  }
  if (cfg.contains("minimal_jump")) {
    const json& m = cfg.at("minimal_jump");
    check_keys(m, {"left", "right", "mass", "scan_points"}, w + ".minimal_jump");
    MinimalJumpOptions opt;
    opt.geodesic = gc;
    opt.scan_points = integer(m, "scan_points", opt.scan_points, w);
    std::optional<State> mass;
    if (m.contains("mass")) mass = state_of(m.at("mass"), w + ".minimal_jump.mass");
    const auto r = minimal_jump_1d(pot, label(m, "left", 0, w), label(m, "right", 1, w), mass, opt);
    out["minimal_jump"] = {{"x", r.x}, {"F0", r.energy}};
  }
  if (cfg.contains("counterexample")) {
    const json& c = cfg.at("counterexample");
    check_keys(c, {"x1", "cutoffs", "table_points"}, w + ".counterexample");
    const auto rows = counterexample_table(pot, numbers(need(c, "x1", w), w + ".x1"), gc);
    CsvWriter csv(ctx.out / "counterexample.csv", {"x1", "distance", "bound", "within"});
    bool all = true;
    json table = json::array();
    for (const auto& r : rows) {
      csv.row({r.x1, r.distance, r.bound, r.within ? 1.0 : 0.0});
      table.push_back({{"x1", r.x1}, {"distance", r.distance}, {"bound", r.bound},
                       {"within", r.within}});
      all = all && r.within;
    }
    json summary = {{"all_within", all}, {"rows", table}};
    if (c.contains("cutoffs")) {
      const auto lv = counterexample_refinement(pot, numbers(c.at("cutoffs"), w + ".cutoffs"),
                                                integer(c, "table_points", 48, w), gc);
      CsvWriter ref(ctx.out / "refinement.csv", {"cutoff", "weighted", "plain"});
      for (const auto& l : lv) ref.row({l.cutoff, l.weighted, l.plain});
    }
    out["counterexample"] = summary;
  }
  if (out.empty()) throw ConfigError(w + ": nothing to evaluate");
  write_json(ctx.out / "sharp.json", out);
}

double polynomial(const std::vector<double>& c, double u, int derivative) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (derivative == 0) {
      v = v * u + c[k];
    } else if (k >= 1) {
      v = v * u + double(k) * c[k];
    }
  }
  return v;
}

void cmd_validate(const json& cfg, Context& ctx) {
  const std::string w = "validate";
  check_keys(cfg, {"potential", "density", "maxwell"}, w);
  json out = json::object();
  if (cfg.contains("potential")) {
    const auto pot = potential_from_config(cfg.at("potential"));
    const int density = integer(cfg, "density", 1000, w);
    out["descriptor"] = pot->descriptor();
    out["report"] = validate_assumptions(*pot, density).to_json();
  }
  if (cfg.contains("maxwell")) {
    const json& m = cfg.at("maxwell");
    check_keys(m, {"polynomial", "bracket"}, w + ".maxwell");
    const auto c = numbers(need(m, "polynomial", w), w + ".maxwell.polynomial");
    const auto b = numbers(need(m, "bracket", w), w + ".maxwell.bracket");
    if (b.size() != 2) throw ConfigError(w + ".maxwell.bracket: expected [lo, hi]");
    const ScalarFunction f{[c](double u) { return polynomial(c, u, 0); },
                           [c](double u) { return polynomial(c, u, 1); }};
    const auto r = maxwell_parameters(f, b[0], b[1]);
    out["maxwell"] = {{"alpha", r.alpha}, {"beta", r.beta}, {"mu", r.mu}};
  }
  if (out.empty()) throw ConfigError(w + ": nothing to validate");
  write_json(ctx.out / "validate.json", out);
}

}  // namespace

// --------------------------------------------------------------------------
// Entry points

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"geodesic", "profile", "minimize",
                                                 "sweep",    "sharp",   "validate"};
  return names;
}

PotentialPtr potential_from_config(const json& j) {
  if (j.is_string()) return make_builtin(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("potential: expected a name or an object");
  if (j.contains("builtin")) {
    check_keys(j, {"builtin", "options"}, "potential");
    return make_builtin(j.at("builtin").get<std::string>(), j.value("options", json::object()));
  }
  return potential_from_json(j);
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = [] {
    const json dw = {{"builtin", "scalar-double-well"}};
    const json modulated = {{"builtin", "modulated"}};
    const json product = {{"builtin", "product-distance"}};
    const json blended = {{"builtin", "blended-quadratic"}};
    const json sweep_eps = {0.1, 0.05, 0.02, 0.01};
    std::vector<Preset> p;
    p.push_back({"scalar-sigma", "surface tension of the scalar double well between -1 and 1",
                 "geodesic",
                 {{"potential", dw}, {"x", {0.0}}, {"p", {-1.0}}, {"q", {1.0}},
                  {"geodesic", {{"nodes", 400}}}}});
    p.push_back({"double-well-sweep", "1D double well, zero mass, four decreasing epsilons",
                 "sweep",
                 {{"potential", dw}, {"epsilons", sweep_eps},
                  {"scenario", {{"constraint", "mass"}, {"mass", {0.0}}, {"position", 0.0}}}}});
    p.push_back({"moving-wells-1d", "modulated potential (1 + x^2)(1 - u^2)^2 with zero mass",
                 "sweep",
                 {{"potential", modulated}, {"epsilons", sweep_eps},
                  {"scenario", {{"constraint", "mass"}, {"mass", {0.0}}, {"position", 0.0}}}}});
    p.push_back({"dirichlet-1d", "double well with trace -1 on the left and 0 on the right",
                 "sweep",
                 {{"potential", dw}, {"epsilons", sweep_eps},
                  {"scenario",
                   {{"constraint", "dirichlet"},
                    {"dirichlet", {{"left", {-1.0}}, {"right", {0.0}}}},
                    {"left", 1},
                    {"right", 2},
                    {"position", 2.0}}}}});
    p.push_back({"counterexample", "non-separated wells: d_W against x1^6 and refinement growth",
                 "sharp",
                 {{"potential", product},
                  {"counterexample",
                   {{"x1", {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}},
                    {"cutoffs", {0.5, 0.25, 0.125}}}}}});
    p.push_back({"near-well-geodesic", "blended quadratic wells, endpoints inside the quadratic zone",
                 "geodesic",
                 {{"potential", blended}, {"x", {0.0}}, {"p", {1.1, 0.15}}, {"q", {0.85, -0.1}},
                  {"geodesic", {{"verbose", true}}}}});
    p.push_back({"profile-1d", "transition profile of the double well at eps = 0.01", "profile",
                 {{"potential", dw}, {"x", {0.0}}, {"p", {-1.0}}, {"q", {1.0}}, {"epsilon", 0.01}}});
    p.push_back({"minimal-jump-1d", "best jump location for the modulated potential", "sharp",
                 {{"potential", modulated}, {"minimal_jump", {{"left", 1}, {"right", 2}}}}});
    p.push_back({"flat-interface-2d", "unit square split in half by mass, interface length 1",
                 "sweep",
                 {{"potential",
                   {{"builtin", "scalar-double-well"},
                    {"options", {{"domain", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}}}}},
                  {"epsilons", {0.04, 0.02}},
                  {"scenario", {{"constraint", "mass"}, {"mass", {0.0}}, {"position", 0.5}}}}});
    p.push_back({"droplet-2d", "circular droplet on the unit square (curvature diagnostic)",
                 "minimize",
                 {{"potential",
                   {{"builtin", "scalar-double-well"},
                    {"options", {{"domain", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}}}}},
                  {"epsilon", 0.04},
                  {"scenario", {{"constraint", "mass"}, {"radius", 0.3}}}}});
    p.push_back({"blended-validate", "assumption report for the blended quadratic potential",
                 "validate", {{"potential", blended}, {"density", 1000}}});
    return p;
  }();
  return list;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

RunManifest run(const std::string& command, const json& config, const fs::path& out_dir,
                std::uint64_t seed, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(command, config, seed);
  m.seed = seed;
  m.threads = std::max(1, threads);
  m.started = utc_now();
  Context ctx{out_dir, seed, m.threads, &m};
  try {
    fs::create_directories(out_dir);
    if (command == "geodesic") {
      cmd_geodesic(config, ctx);
    } else if (command == "profile") {
      cmd_profile(config, ctx);
    } else if (command == "minimize") {
      cmd_sweep(config, ctx, true);
    } else if (command == "sweep") {
      cmd_sweep(config, ctx, false);
    } else if (command == "sharp") {
      cmd_sharp(config, ctx);
    } else if (command == "validate") {
      cmd_validate(config, ctx);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (const std::exception& e) {
    m.status = "error";
    m.exit_code = exit_code_of(e);
    m.error = e.what();
  }
  m.finished = utc_now();
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::error_code ec;
  if (fs::is_directory(out_dir, ec)) {
    for (const auto& entry : fs::recursive_directory_iterator(out_dir, ec)) {
      if (entry.is_regular_file()) {
        m.files.push_back(fs::relative(entry.path(), out_dir).generic_string());
      }
    }
    if (std::find(m.files.begin(), m.files.end(), "manifest.json") == m.files.end()) {
      m.files.push_back("manifest.json");
    }
    std::sort(m.files.begin(), m.files.end());
    try {
      write_json(out_dir / "manifest.json", m.to_json());
    } catch (const std::exception& e) {
      if (m.exit_code == 0) {
        m.status = "error";
        m.exit_code = exit_code_of(e);
        m.error = e.what();
      }
    }
  }
  return m;
}

}  // namespace phasegeo
