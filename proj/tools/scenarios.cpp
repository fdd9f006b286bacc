#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "focalkit/charts.hpp"
#include "focalkit/error.hpp"
#include "focalkit/veronese.hpp"
#include "runner.hpp"

namespace focalkit::cli {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Tracks which --set / --tol-overrides keys a scenario consumed.
class Knobs {
 public:
  explicit Knobs(const RunOptions& o) : opts_(o) {}

  std::string str(const std::string& key, const std::string& fallback) {
    used_params_.insert(key);
    const auto it = opts_.params.find(key);
    return it == opts_.params.end() ? fallback : it->second;
  }
  double real(const std::string& key, double fallback) {
    const std::string s = str(key, "");
    if (s.empty()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("--set " + key + "=" + s + ": expected a number");
    }
  }
  int integer(const std::string& key, int fallback) {
    const double v = real(key, fallback);
    if (v != std::floor(v)) throw UsageError("--set " + key + ": expected an integer");
    return static_cast<int>(v);
  }
  double tol(const std::string& key, double fallback) {
    used_tols_.insert(key);
    const auto it = opts_.tol_overrides.find(key);
    return it == opts_.tol_overrides.end() ? fallback : it->second;
  }

  void check_unused() const {
    for (const auto& [k, v] : opts_.params)
      if (!used_params_.count(k)) throw UsageError("unknown scenario parameter '" + k + "'");
    for (const auto& [k, v] : opts_.tol_overrides)
      if (!used_tols_.count(k)) throw UsageError("unknown tolerance override '" + k + "'");
  }

 private:
  const RunOptions& opts_;
  std::set<std::string> used_params_;
  std::set<std::string> used_tols_;
};

SampleConfig sample_config(Knobs& k, const RunOptions& opts, SampleConfig c) {
  c.seed = opts.seed;
  if (opts.samples) {
    c.curvature_cap = *opts.samples;
    c.diameter_samples = *opts.samples;
  }
  c.grid_per_axis = static_cast<int>(k.tol("grid_per_axis", c.grid_per_axis));
  c.curvature_cap = static_cast<std::size_t>(k.tol("curvature_cap", static_cast<double>(c.curvature_cap)));
  c.diameter_samples = static_cast<std::size_t>(k.tol("diameter_samples", static_cast<double>(c.diameter_samples)));
  c.refine_candidates = static_cast<int>(k.tol("refine_candidates", c.refine_candidates));
  c.refine_budget = static_cast<int>(k.tol("refine_budget", c.refine_budget));
  c.direction_restarts = static_cast<int>(k.tol("direction_restarts", c.direction_restarts));
  c.fd_step = k.tol("fd_step", c.fd_step);
  c.jacobian_step = k.tol("jacobian_step", c.jacobian_step);
  return c;
}

AuditOptions audit_options(Knobs& k) {
  AuditOptions a;
  a.equality_tolerance = k.tol("equality_tolerance", a.equality_tolerance);
  a.theorem_tolerance = k.tol("theorem_tolerance", a.theorem_tolerance);
  a.jung_tolerance = k.tol("jung_tolerance", a.jung_tolerance);
  a.probe_geodesics = static_cast<int>(k.tol("probe_geodesics", a.probe_geodesics));
  a.probe_steps = static_cast<int>(k.tol("probe_steps", a.probe_steps));
  return a;
}

json config_json(const SampleConfig& c) {
  return json{{"grid_per_axis", c.grid_per_axis},
              {"curvature_cap", c.curvature_cap},
              {"diameter_samples", c.diameter_samples},
              {"refine_candidates", c.refine_candidates},
              {"refine_budget", c.refine_budget},
              {"direction_restarts", c.direction_restarts},
              {"fd_step", c.fd_step},
              {"jacobian_step", c.jacobian_step},
              {"seed", c.seed}};
}

json config_json(const AuditOptions& a) {
  return json{{"equality_tolerance", a.equality_tolerance},
              {"theorem_tolerance", a.theorem_tolerance},
              {"jung_tolerance", a.jung_tolerance},
              {"probe_geodesics", a.probe_geodesics},
              {"probe_steps", a.probe_steps}};
}

class Checks {
 public:
  Checks(Knobs& k, std::vector<Expectation>& out) : knobs_(k), out_(out) {}

  void near(const std::string& name, double value, double expected, double tol, const char* prov) {
    add(name, value, expected, tol, Comparison::near, prov);
  }
  void greater(const std::string& name, double value, double bound, const char* prov) {
    add(name, value, bound, 0.0, Comparison::greater, prov);
  }
  void less(const std::string& name, double value, double bound, const char* prov) {
    add(name, value, bound, 0.0, Comparison::less, prov);
  }
  void flag(const std::string& name, bool ok, const char* prov) {
    add(name, ok ? 1.0 : 0.0, 1.0, 0.0, Comparison::near, prov);
  }

 private:
  void add(const std::string& name, double value, double expected, double tol, Comparison c, const char* prov) {
    Expectation e;
    e.name = name;
    e.value = value;
    e.comparison = c;
    e.provenance = prov;
    // Bounds are overridable as well as tolerances.
    if (c == Comparison::near) {
      e.expected = expected;
      e.tolerance = knobs_.tol(name, tol);
      e.passed = std::abs(value - expected) <= e.tolerance;
    } else {
      e.expected = knobs_.tol(name, expected);
      e.passed = c == Comparison::greater ? value > e.expected : value < e.expected;
    }
    out_.push_back(e);
  }

  Knobs& knobs_;
  std::vector<Expectation>& out_;
};

double now() { return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count(); }

void jung_checks(Checks& chk, const AuditReport& rep) {
  if (!rep.jung) return;
  chk.flag("jung_lower", rep.jung->lower_ok, "PAPER");
  chk.flag("jung_upper", rep.jung->upper_ok, "PAPER");
}

void umbilical_pipeline(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts, int kappa, int n, int m,
                        double rho, bool check_curvature) {
  ImmersedManifold man = umbilical_sphere(kappa, n, m, rho);
  man.with_config(sample_config(k, opts, man.config()));
  const AuditOptions ao = audit_options(k);
  env.config = {{"sample", config_json(man.config())}, {"audit", config_json(ao)}};
  const AuditReport rep = audit(man, ao);
  env.report = to_json(rep);

  const double c = std::abs(circle_from_radius(kappa, rho).curvature);
  if (check_curvature) chk.near("max_normal_curvature", rep.curvature.value, c, 1e-5, "DERIVED");
  chk.near("focal_radius", rep.focal_radius.value_or_inf(), rho, 1e-4 * rho, "TRIVIAL");
  chk.near("extrinsic_diameter", rep.diameter.value, 2.0 * rho, 1e-4, "TRIVIAL");
  chk.near("ratio", rep.ratio, 2.0, 1e-4, "TRIVIAL");
  chk.flag("equality_flag", rep.equality_flag, "PAPER");
  chk.flag("theorem_bound", rep.theorem_ok, "PAPER");
  if (rep.planar_geodesics) {
    chk.less("planar_plane_residual", rep.planar_geodesics->max_plane_residual, 1e-5, "TRIVIAL");
    chk.less("planar_circle_defect", rep.planar_geodesics->max_circle_defect, 1e-5, "TRIVIAL");
  }
  if (rep.circumradius) chk.near("circumradius", rep.circumradius->value, rho, 1e-4 * rho, "TRIVIAL");
  jung_checks(chk, rep);
}

void scenario_umbilical(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  const int kappa = k.integer("kappa", 0);
  const int n = k.integer("n", 3);
  const int m = k.integer("m", 2);
  const double rho = k.real("rho", 1.0);
  env.parameters = {{"kappa", kappa}, {"n", n}, {"m", m}, {"rho", rho}};
  umbilical_pipeline(env, k, chk, opts, kappa, n, m, rho, true);
}

void scenario_small_sphere(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  const int n = k.integer("n", 3);
  const int m = k.integer("m", 2);
  const double rho = k.real("rho", 0.7);
  env.parameters = {{"kappa", 1}, {"n", n}, {"m", m}, {"rho", rho}};
  umbilical_pipeline(env, k, chk, opts, 1, n, m, rho, true);
}

void scenario_hyperbolic_sphere(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  const int n = k.integer("n", 3);
  const int m = k.integer("m", 2);
  const double rho = k.real("rho", 1.2);
  env.parameters = {{"kappa", -1}, {"n", n}, {"m", m}, {"rho", rho}};
  umbilical_pipeline(env, k, chk, opts, -1, n, m, rho, true);
}

void scenario_veronese(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  Field f;
  try {
    f = parse_field(k.str("field", "C"));
  } catch (const std::exception& e) {
    throw UsageError(std::string("--set field: ") + e.what());
  }
  const int l = k.integer("l", 2);
  const int kappa = k.integer("kappa", 0);
  if (l < 1 || (f == Field::O && l > 2)) throw UsageError("--set l: out of range for " + std::string(field_name(f)));
  const int big_n = hermitian_dimension(f, l + 1);
  const int n = k.integer("n", kappa == 0 ? big_n : big_n - 1);
  const double scale = k.real("scale", kappa == 0 ? 1.0 : (kappa == 1 ? std::numbers::pi / 2 : 1.0));
  env.parameters = {{"field", std::string(field_name(f))}, {"l", l}, {"kappa", kappa}, {"n", n}, {"scale", scale}};

  VeroneseInto vi = veronese_into(f, l, SpaceForm(kappa, n), scale);
  vi.manifold.with_config(sample_config(k, opts, vi.manifold.config()));
  const AuditOptions ao = audit_options(k);
  env.config = {{"sample", config_json(vi.manifold.config())}, {"audit", config_json(ao)}};

  // Point certification on random lines.
  const int points = static_cast<int>(k.tol("certify_points", 1000));
  Rng rng(derive_seed(opts.seed, 77));
  double worst = 0.0;
  int passed = 0;
  for (int i = 0; i < points; ++i) {
    const PointCertificate c = certify_point(projector_from_line(random_line(f, l, rng)).matrix());
    worst = std::max({worst, c.hermitian_residual, c.idempotency_residual, c.trace_residual, c.rank_residual,
                      c.sphere_residual});
    if (c.passed()) ++passed;
  }
  const IsometryCheck iso = vi.embedding.certify_isometry(derive_seed(opts.seed, 78));

  const AuditReport rep = audit(vi.manifold, ao);
  env.report = to_json(rep);
  env.report["embedding"] = {{"stage", vi.embedding.describe()},
                             {"distance_factor", vi.embedding.distance_factor()},
                             {"isometry_pairs", iso.pairs},
                             {"isometry_max_relative_error", iso.max_relative_error}};
  env.report["certification"] = {{"points", points}, {"passed", passed}, {"max_residual", worst}};

  chk.near("certified_points", passed, points, 0.0, "PAPER");
  chk.flag("isometry", iso.passed, "DERIVED");
  if (kappa == 0) {
    const double factor = vi.embedding.distance_factor();
    chk.near("extrinsic_diameter", rep.diameter.value, std::sqrt(2.0) * factor, 1e-3 * factor, "DERIVED");
    chk.near("max_normal_curvature", rep.curvature.value, std::sqrt(2.0) / factor, 5e-3 / factor, "DERIVED");
  }
  chk.near("ratio", rep.ratio, 2.0, 5e-3, "PAPER");
  chk.flag("equality_flag", rep.equality_flag, "PAPER");
  chk.flag("theorem_bound", rep.theorem_ok, "PAPER");
  if (rep.planar_geodesics) {
    chk.near("planar_geodesics_succeeded", rep.planar_geodesics->succeeded, rep.planar_geodesics->requested, 0.0,
             "DERIVED");
    chk.less("planar_plane_residual", rep.planar_geodesics->max_plane_residual, 1e-4, "DERIVED");
    chk.less("planar_circle_defect", rep.planar_geodesics->max_circle_defect, 1e-4, "DERIVED");
    chk.less("planar_radius_dispersion", rep.planar_geodesics->radius_dispersion, 1e-3, "DERIVED");
  } else {
    chk.flag("planar_probe_ran", false, "DERIVED");
  }
  jung_checks(chk, rep);
}

void scenario_clifford(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  ImmersedManifold man = clifford_torus_example();
  man.with_config(sample_config(k, opts, man.config()));
  const AuditOptions ao = audit_options(k);
  env.config = {{"sample", config_json(man.config())}, {"audit", config_json(ao)}};
  const AuditReport rep = audit(man, ao);
  env.report = to_json(rep);
  chk.near("max_normal_curvature", rep.curvature.value, std::sqrt(1.5), 1e-4, "PAPER");
  chk.near("focal_radius", rep.focal_radius.value_or_inf(), std::sqrt(2.0 / 3.0), 1e-4, "DERIVED");
  chk.near("extrinsic_diameter", rep.diameter.value, std::sqrt(3.0), 1e-3, "PAPER");
  chk.near("circumradius", rep.circumradius->value, 1.0, 1e-4, "DERIVED");
  chk.near("ratio", rep.ratio, 3.0 / std::sqrt(2.0), 5e-3, "DERIVED");
  chk.greater("ratio_above_two", rep.ratio, 2.0, "PAPER");
  chk.flag("equality_flag_false", !rep.equality_flag, "DERIVED");
  chk.flag("theorem_bound", rep.theorem_ok, "PAPER");
  jung_checks(chk, rep);
}

std::vector<double> parse_axes(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--set axes: expected comma-separated numbers");
    }
  }
  return out;
}

void scenario_ellipsoid(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  const std::vector<double> axes = parse_axes(k.str("axes", "1,1,1.3"));
  const int n = k.integer("n", static_cast<int>(axes.size()));
  env.parameters = {{"axes", axes}, {"n", n}};
  ImmersedManifold man = ellipsoid(axes, n);
  man.with_config(sample_config(k, opts, man.config()));
  AuditOptions ao = audit_options(k);
  ao.probe = ProbeMode::always;
  env.config = {{"sample", config_json(man.config())}, {"audit", config_json(ao)}};
  const AuditReport rep = audit(man, ao);
  env.report = to_json(rep);

  const double amax = *std::max_element(axes.begin(), axes.end());
  const double amin = *std::min_element(axes.begin(), axes.end());
  chk.near("max_normal_curvature", rep.curvature.value, amax / (amin * amin), 1e-4, "DERIVED");
  chk.near("extrinsic_diameter", rep.diameter.value, 2.0 * amax, 1e-3, "DERIVED");
  chk.flag("theorem_bound", rep.theorem_ok, "PAPER");
  if (amax > amin * (1.0 + 1e-9)) {
    chk.greater("ratio_excess", rep.ratio - 2.0, 1e-3, "DERIVED");
    chk.greater("planar_residual", std::max(rep.planar_geodesics->max_plane_residual,
                                            rep.planar_geodesics->max_circle_defect),
                1e-3, "DERIVED");
  }
  jung_checks(chk, rep);
}

void scenario_helix(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  const double curvature = k.real("curvature", 0.9);
  const double torsion = k.real("torsion", 0.3);
  const double r = k.real("r", 1.0);
  const auto count = static_cast<std::size_t>(opts.samples ? *opts.samples : 2001);
  env.parameters = {{"curvature", curvature}, {"torsion", torsion}, {"r", r}, {"points", count}};
  const double length = std::numbers::pi * r;
  const DiscreteCurve c = helix_curve(curvature, torsion, length, count);
  const BowReport rep = bow_chord_check(c, r, k.tol("near_equality_factor", 1e-3));
  env.report = to_json(rep);
  // Closed-form chord of the helix.
  const double w2 = curvature * curvature + torsion * torsion;
  const double w = std::sqrt(w2);
  const double a = curvature / w2, b = torsion / w2;
  const double chord = std::hypot(2.0 * a * std::sin(w * length / 2.0), b * w * length);
  env.report["closed_form_chord"] = chord;
  chk.near("chord", rep.chord, chord, 1e-9, "DERIVED");
  chk.greater("bow_margin", rep.margin, 0.05, "DERIVED");
}

void scenario_half_circle(ReportEnvelope& env, Knobs& k, Checks& chk, const RunOptions& opts) {
  const int kappa = k.integer("kappa", 0);
  const int n = k.integer("n", 2);
  const double r = k.real("r", 1.0);
  const auto count = static_cast<std::size_t>(opts.samples ? *opts.samples : 2001);
  env.parameters = {{"kappa", kappa}, {"n", n}, {"r", r}, {"points", count}};
  const DiscreteCurve c = half_circle_curve(kappa, n, r, count);
  const BowReport rep = bow_chord_check(c, r, k.tol("near_equality_factor", 1e-3));
  env.report = to_json(rep);
  chk.near("bow_margin", rep.margin, 0.0, 1e-5, "TRIVIAL");
  chk.flag("near_equality", rep.near_equality, "PAPER");
  if (rep.planarity) {
    chk.less("plane_residual", rep.planarity->plane_residual, 1e-6, "TRIVIAL");
    chk.less("circle_defect", rep.planarity->circle_defect, 1e-6, "TRIVIAL");
  }
}

using Runner = void (*)(ReportEnvelope&, Knobs&, Checks&, const RunOptions&);

struct Entry {
  ScenarioInfo info;
  Runner run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"umbilical-sphere", "totally umbilical m-sphere in M^n(kappa)", {"kappa", "n", "m", "rho"}}, scenario_umbilical},
      {{"small-sphere-in-Sn", "distance sphere of radius rho in S^n", {"n", "m", "rho"}}, scenario_small_sphere},
      {{"sphere-in-Hn", "distance sphere of radius rho in H^n", {"n", "m", "rho"}}, scenario_hyperbolic_sphere},
      {{"veronese", "Veronese embedding of FP^l", {"field", "l", "kappa", "n", "scale"}}, scenario_veronese},
      {{"clifford-torus", "flat torus in R^6 with constant normal curvature", {}}, scenario_clifford},
      {{"ellipsoid", "ellipsoid with the given semi-axes", {"axes", "n"}}, scenario_ellipsoid},
      {{"helix-bow", "chord comparison for a helix", {"curvature", "torsion", "r"}}, scenario_helix},
      {{"half-circle-bow", "chord comparison for an exact half-circle", {"kappa", "n", "r"}}, scenario_half_circle},
  };
  return r;
}

}  // namespace

std::string Expectation::describe() const {
  std::string s = name + ": " + num(value);
  switch (comparison) {
    case Comparison::near: s += " vs " + num(expected) + " (tol " + num(tolerance) + ")"; break;
    case Comparison::greater: s += " > " + num(expected); break;
    case Comparison::less: s += " < " + num(expected); break;
  }
  return s + " [" + provenance + "] " + (passed ? "pass" : "FAIL");
}

bool ReportEnvelope::passed() const {
  if (error) return false;
  for (const auto& e : expectations)
    if (!e.passed) return false;
  return true;
}

json ReportEnvelope::to_json() const {
  json ex = json::array();
  for (const auto& e : expectations) {
    const char* cmp = e.comparison == Comparison::near ? "near" : (e.comparison == Comparison::greater ? "greater" : "less");
    ex.push_back({{"name", e.name},
                  {"value", e.value},
                  {"expected", e.expected},
                  {"tolerance", e.tolerance},
                  {"comparison", cmp},
                  {"provenance", e.provenance},
                  {"passed", e.passed}});
  }
  json j = {{"schema", kSchema},   {"version", kVersion},   {"scenario", scenario},
            {"seed", seed},        {"config", config},      {"parameters", parameters},
            {"report", report},    {"expectations", ex},    {"passed", passed()},
            {"duration_seconds", duration}};
  if (error) j["error"] = *error;
  return j;
}

const std::vector<ScenarioInfo>& builtin_scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

ReportEnvelope run_scenario(const std::string& name, const RunOptions& opts) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return e.info.name == name; });
  if (it == reg.end()) throw UsageError("unknown scenario '" + name + "' (see --list)");
  ReportEnvelope env;
  env.scenario = name;
  env.seed = opts.seed;
  Knobs knobs(opts);
  Checks checks(knobs, env.expectations);
  const double t0 = now();
  try {
    it->run(env, knobs, checks, opts);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    env.error = e.what();
  }
  if (!env.error) knobs.check_unused();
  env.duration = now() - t0;
  return env;
}

}  // namespace focalkit::cli
