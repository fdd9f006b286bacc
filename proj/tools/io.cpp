#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "focalkit/charts.hpp"
#include "focalkit/error.hpp"
#include "focalkit/veronese.hpp"
#include "runner.hpp"

namespace focalkit::cli {

namespace {

json vec(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Infinite reals are spelled out; JSON has no infinity.
json real_or_inf(double x) {
  if (std::isinf(x)) return "infinite";
  return x;
}

json summary(const CurvatureSummary& s) {
  return {{"min", s.min}, {"mean", s.mean}, {"stddev", s.stddev}, {"count", s.count}};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": invalid JSON (" + e.what() + ")");
  }
}

const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw UsageError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw UsageError(path + "/" + key + ": missing");
  return *it;
}

int need_int(const json& obj, const std::string& key, const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_number_integer()) throw UsageError(path + "/" + key + ": expected an integer");
  return v.get<int>();
}

double need_real(const json& obj, const std::string& key, const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_number()) throw UsageError(path + "/" + key + ": expected a number");
  return v.get<double>();
}

double opt_real(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  return need_real(obj, key, path);
}

std::vector<double> real_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw UsageError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw UsageError(path + "/" + std::to_string(i) + ": expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

SampleConfig apply_sample_config(const json& j, const std::string& path, SampleConfig c) {
  if (!j.is_object()) throw UsageError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string p = path + "/" + key;
    if (!value.is_number()) throw UsageError(p + ": expected a number");
    const double v = value.get<double>();
    if (key == "grid_per_axis") c.grid_per_axis = static_cast<int>(v);
    else if (key == "curvature_cap") c.curvature_cap = static_cast<std::size_t>(v);
    else if (key == "diameter_samples") c.diameter_samples = static_cast<std::size_t>(v);
    else if (key == "refine_candidates") c.refine_candidates = static_cast<int>(v);
    else if (key == "refine_budget") c.refine_budget = static_cast<int>(v);
    else if (key == "direction_restarts") c.direction_restarts = static_cast<int>(v);
    else if (key == "fd_step") c.fd_step = v;
    else if (key == "jacobian_step") c.jacobian_step = v;
    else throw UsageError(p + ": unknown sample setting");
  }
  return c;
}

double now() { return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count(); }

}  // namespace

json to_json(const PlanarityReport& r) {
  json j = {{"plane_residual", r.plane_residual},
            {"radius", real_or_inf(r.radius)},
            {"finite_radius", r.finite_radius},
            {"circle_defect", r.circle_defect},
            {"curvature_mean", r.curvature_mean},
            {"curvature_variance", r.curvature_variance},
            {"points", r.points}};
  if (r.finite_radius) j["center"] = vec(r.center);
  return j;
}

json to_json(const BowReport& r) {
  json j = {{"r", r.r},
            {"length", r.length},
            {"half_circumference", r.half_circumference},
            {"chord", r.chord},
            {"comparison_chord", r.comparison_chord},
            {"margin", r.margin},
            {"length_adjusted_margin", r.length_adjusted_margin},
            {"circle_curvature", r.circle_curvature},
            {"max_curvature", r.max_curvature},
            {"curvature_tolerance", r.curvature_tolerance},
            {"curvature_slack", r.curvature_slack},
            {"near_equality", r.near_equality}};
  if (r.planarity) j["planarity"] = to_json(*r.planarity);
  return j;
}

json to_json(const PlanarGeodesicStats& s) {
  return {{"requested", s.requested},
          {"succeeded", s.succeeded},
          {"length", s.length},
          {"max_plane_residual", s.max_plane_residual},
          {"max_circle_defect", s.max_circle_defect},
          {"radius_mean", s.radius_mean},
          {"radius_dispersion", s.radius_dispersion},
          {"max_closure_gap", s.max_closure_gap},
          {"notes", s.notes}};
}

json to_json(const AuditReport& r) {
  json j = {{"manifold", r.manifold},
            {"ambient", r.ambient},
            {"focal_radius", real_or_inf(r.focal_radius.value_or_inf())},
            {"max_normal_curvature",
             {{"value", r.curvature.value},
              {"params", vec(r.curvature.params)},
              {"tangent", vec(r.curvature.tangent)},
              {"converged", r.curvature.converged},
              {"samples", summary(r.curvature.samples)},
              {"pointwise_max", summary(r.curvature.pointwise_max)}}},
            {"extrinsic_diameter",
             {{"value", r.diameter.value},
              {"lower_bound", true},
              {"sampled_value", r.diameter.sampled_value},
              {"params_a", vec(r.diameter.params_a)},
              {"params_b", vec(r.diameter.params_b)}}},
            {"ratio", r.ratio},
            {"equality_flag", r.equality_flag},
            {"theorem_ok", r.theorem_ok},
            {"provenance",
             {{"seed", r.seed},
              {"curvature_grid", r.curvature_grid},
              {"curvature_refine_evaluations", r.curvature_refine_evaluations},
              {"diameter_samples", r.diameter_samples},
              {"diameter_refine_sweeps", r.diameter_refine_sweeps}}},
            {"notes", r.notes}};
  if (r.circumradius) {
    j["circumradius"] = {{"value", r.circumradius->value},
                         {"center", vec(r.circumradius->center)},
                         {"sample_radius", r.circumradius->sample_radius},
                         {"rounds", r.circumradius->rounds}};
  }
  if (r.jung) j["jung"] = {{"lower_ok", r.jung->lower_ok}, {"upper_ok", r.jung->upper_ok}};
  if (r.planar_geodesics) j["planar_geodesics"] = to_json(*r.planar_geodesics);
  return j;
}

ImmersedManifold immersion_from_spec(const json& spec) {
  const std::string root = "";
  if (!spec.is_object()) throw UsageError("/: expected an object");
  const json& amb = need(spec, "ambient", root);
  const int kappa = need_int(amb, "kappa", "/ambient");
  const int n = need_int(amb, "n", "/ambient");
  if (kappa < -1 || kappa > 1) throw UsageError("/ambient/kappa: must be 0, 1 or -1");
  if (n < 2 || n > 64) throw UsageError("/ambient/n: must be between 2 and 64");
  const SpaceForm space(kappa, n);
  const int dim = need_int(spec, "dim", root);
  if (dim < 1 || dim >= n) throw UsageError("/dim: must satisfy 1 <= dim < n");

  std::optional<ImmersedManifold> man;
  const bool has_chart = spec.contains("chart");
  const bool has_table = spec.contains("tabulated");
  if (has_chart == has_table) throw UsageError("/: exactly one of 'chart' or 'tabulated' is required");

  try {
    if (has_chart) {
      const json& chart = spec["chart"];
      const json& fam = need(chart, "family", "/chart");
      if (!fam.is_string()) throw UsageError("/chart/family: expected a string");
      const std::string family = fam.get<std::string>();
      const json params = chart.contains("params") ? chart["params"] : json::object();
      if (!params.is_object()) throw UsageError("/chart/params: expected an object");
      if (family == "umbilical-sphere") {
        man = umbilical_sphere(kappa, n, dim, need_real(params, "rho", "/chart/params"));
      } else if (family == "ellipsoid") {
        if (kappa != 0) throw UsageError("/ambient/kappa: ellipsoid needs a flat ambient");
        const auto axes = real_array(need(params, "axes", "/chart/params"), "/chart/params/axes");
        if (static_cast<int>(axes.size()) != dim + 1) throw UsageError("/chart/params/axes: need dim + 1 axes");
        man = ellipsoid(axes, n);
      } else if (family == "clifford-torus") {
        if (kappa != 0 || n != 6 || dim != 2) throw UsageError("/chart: clifford-torus lives in R^6 with dim 2");
        man = clifford_torus_example();
      } else if (family == "veronese") {
        const json& fj = need(params, "field", "/chart/params");
        if (!fj.is_string()) throw UsageError("/chart/params/field: expected one of R, C, H, O");
        Field f;
        try {
          f = parse_field(fj.get<std::string>());
        } catch (const std::exception&) {
          throw UsageError("/chart/params/field: expected one of R, C, H, O");
        }
        const int l = need_int(params, "l", "/chart/params");
        const double scale =
            opt_real(params, "scale", "/chart/params", kappa == 1 ? std::numbers::pi / 2 : 1.0);
        if (dim != field_dim(f) * l) throw UsageError("/dim: veronese " + std::string(field_name(f)) + "P" +
                                                      std::to_string(l) + " has dimension " +
                                                      std::to_string(field_dim(f) * l));
        man = veronese_into(f, l, space, scale).manifold;
      } else {
        throw UsageError("/chart/family: unknown family '" + family + "'");
      }
    } else {
      const json& tab = spec["tabulated"];
      const json& shape_j = need(tab, "shape", "/tabulated");
      if (!shape_j.is_array()) throw UsageError("/tabulated/shape: expected an array of integers");
      std::vector<int> shape;
      std::size_t total = 1;
      for (std::size_t i = 0; i < shape_j.size(); ++i) {
        if (!shape_j[i].is_number_integer()) throw UsageError("/tabulated/shape/" + std::to_string(i) + ": expected an integer");
        shape.push_back(shape_j[i].get<int>());
        if (shape.back() < 3) throw UsageError("/tabulated/shape/" + std::to_string(i) + ": need at least 3 nodes");
        total *= static_cast<std::size_t>(shape.back());
      }
      if (static_cast<int>(shape.size()) != dim) throw UsageError("/tabulated/shape: need one entry per dimension");
      const json& values = need(tab, "values", "/tabulated");
      if (!values.is_array() || values.size() != total) {
        throw UsageError("/tabulated/values: expected " + std::to_string(total) + " rows");
      }
      MatrixXd table(static_cast<Eigen::Index>(total), space.coord_dim());
      for (std::size_t i = 0; i < total; ++i) {
        const std::string p = "/tabulated/values/" + std::to_string(i);
        const auto row = real_array(values[i], p);
        if (static_cast<int>(row.size()) != space.coord_dim()) {
          throw UsageError(p + ": expected " + std::to_string(space.coord_dim()) + " coordinates");
        }
        for (int c = 0; c < space.coord_dim(); ++c) table(static_cast<Eigen::Index>(i), c) = row[static_cast<std::size_t>(c)];
      }
      man = tabulated_periodic("tabulated", space, shape, table);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const DomainError& e) {
    throw UsageError(std::string(has_chart ? "/chart" : "/tabulated") + ": " + e.what());
  }

  if (spec.contains("sample_config")) man->with_config(apply_sample_config(spec["sample_config"], "/sample_config", man->config()));
  if (spec.contains("name")) {
    if (!spec["name"].is_string()) throw UsageError("/name: expected a string");
    ImmersedManifold renamed(spec["name"].get<std::string>(), man->ambient(), man->dim(), man->domain(),
                             [m = *man](const VectorXd& w) { return m.raw_point(w); });
    renamed.with_config(man->config());
    if (man->has_analytic()) {
      renamed.with_analytic([m = *man](const VectorXd& w) { return m.jacobian(w, DiffMode::analytic); },
                            [m = *man](const VectorXd& w, const VectorXd& a) {
                              return m.second_derivative(w, a, DiffMode::analytic);
                            });
    }
    man = std::move(renamed);
  }
  return *man;
}

// ---------------------------------------------------------------------------
// Curves

CurveFile parse_curve_json(const json& doc) {
  int kappa = 0, n = 0;
  std::optional<double> r;
  std::vector<VectorXd> pts;
  auto read_header = [&](const json& h, const std::string& path) {
    kappa = need_int(h, "kappa", path);
    n = need_int(h, "n", path);
    if (kappa < -1 || kappa > 1) throw UsageError(path + "/kappa: must be 0, 1 or -1");
    if (n < 2) throw UsageError(path + "/n: must be at least 2");
    if (h.contains("r")) r = need_real(h, "r", path);
  };
  auto read_point = [&](const json& c, const std::string& path) {
    const auto v = real_array(c, path);
    const int want = kappa == 0 ? n : n + 1;
    if (static_cast<int>(v.size()) != want) {
      throw UsageError(path + ": expected " + std::to_string(want) + " coordinates");
    }
    pts.push_back(Eigen::Map<const VectorXd>(v.data(), want));
  };

  if (doc.is_array()) {
    if (doc.empty()) throw UsageError("/: empty curve file");
    read_header(doc[0], "/0");
    for (std::size_t i = 1; i < doc.size(); ++i) {
      const std::string p = "/" + std::to_string(i);
      read_point(need(doc[i], "coords", p), p + "/coords");
    }
  } else if (doc.is_object()) {
    read_header(doc, "");
    const json& list = need(doc, "points", "");
    if (!list.is_array()) throw UsageError("/points: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& item = list[i];
      const std::string p = "/points/" + std::to_string(i);
      read_point(item.is_object() ? need(item, "coords", p) : item, item.is_object() ? p + "/coords" : p);
    }
  } else {
    throw UsageError("/: expected an array or an object");
  }
  try {
    return CurveFile{DiscreteCurve(SpaceForm(kappa, n), std::move(pts)), r};
  } catch (const DomainError& e) {
    throw UsageError(std::string("curve: ") + e.what());
  }
}

CurveFile parse_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string names, values;
  if (!std::getline(in, names) || !std::getline(in, values)) throw UsageError("csv: missing the two header lines");
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
      while (!item.empty() && (item.back() == '\r' || item.back() == ' ')) item.pop_back();
      while (!item.empty() && item.front() == ' ') item.erase(item.begin());
      out.push_back(item);
    }
    return out;
  };
  const auto keys = split(names);
  const auto vals = split(values);
  if (keys.size() != vals.size()) throw UsageError("csv line 2: expected one value per header name");
  json header = json::object();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(vals[i], &pos);
      if (keys[i] == "kappa" || keys[i] == "n") {
        header[keys[i]] = static_cast<int>(v);
      } else {
        header[keys[i]] = v;
      }
    } catch (const std::exception&) {
      throw UsageError("csv line 2, column " + std::to_string(i + 1) + ": expected a number");
    }
  }
  json doc = json::array();
  doc.push_back(header);
  std::string line;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    json coords = json::array();
    for (const auto& cell : split(line)) {
      try {
        coords.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw UsageError("csv line " + std::to_string(lineno) + ": expected numbers");
      }
    }
    doc.push_back({{"coords", coords}});
  }
  return parse_curve_json(doc);
}

CurveFile read_curve_file(const std::string& path) {
  const std::string text = read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    return parse_curve_json(parse_json_text(text, path));
  }
  return parse_curve_csv(text);
}

void write_curve_json(const std::string& path, const DiscreteCurve& curve, std::optional<double> r) {
  json doc = json::array();
  json header = {{"kappa", curve.space().kappa()}, {"n", curve.space().dim()}};
  if (r) header["r"] = *r;
  doc.push_back(header);
  for (const auto& p : curve.points()) doc.push_back({{"coords", vec(p)}});
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << doc.dump(1) << "\n";
}

void write_curve_csv(const std::string& path, const DiscreteCurve& curve, std::optional<double> r) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw UsageError("cannot write '" + path + "'");
  if (r) {
    std::fprintf(f, "kappa,n,r\n%d,%d,%.17g\n", curve.space().kappa(), curve.space().dim(), *r);
  } else {
    std::fprintf(f, "kappa,n\n%d,%d\n", curve.space().kappa(), curve.space().dim());
  }
  for (const auto& p : curve.points()) {
    for (Eigen::Index i = 0; i < p.size(); ++i) std::fprintf(f, i ? ",%.17g" : "%.17g", p[i]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

// ---------------------------------------------------------------------------

ReportEnvelope run_custom_immersion(const std::string& spec_path, const RunOptions& opts) {
  if (!opts.task.empty() && opts.task != "audit") throw UsageError("--spec supports only --task audit");
  ReportEnvelope env;
  env.scenario = "custom:" + spec_path;
  env.seed = opts.seed;
  const json spec = parse_json_text(read_text(spec_path), spec_path);
  ImmersedManifold man = immersion_from_spec(spec);
  SampleConfig cfg = man.config();
  cfg.seed = opts.seed;
  if (opts.samples) cfg.curvature_cap = cfg.diameter_samples = *opts.samples;
  man.with_config(cfg);

  AuditOptions ao;
  for (const auto& [k, v] : opts.tol_overrides) {
    if (k == "equality_tolerance") ao.equality_tolerance = v;
    else if (k == "theorem_tolerance") ao.theorem_tolerance = v;
    else if (k == "jung_tolerance") ao.jung_tolerance = v;
    else if (k == "probe_geodesics") ao.probe_geodesics = static_cast<int>(v);
    else if (k == "probe_steps") ao.probe_steps = static_cast<int>(v);
    else throw UsageError("unknown tolerance override '" + k + "' for --spec");
  }
  if (!opts.params.empty()) throw UsageError("--set is not used with --spec");
  env.parameters = spec;
  env.config = {{"sample",
                 {{"grid_per_axis", cfg.grid_per_axis},
                  {"curvature_cap", cfg.curvature_cap},
                  {"diameter_samples", cfg.diameter_samples},
                  {"seed", cfg.seed}}},
                {"audit",
                 {{"equality_tolerance", ao.equality_tolerance},
                  {"theorem_tolerance", ao.theorem_tolerance},
                  {"jung_tolerance", ao.jung_tolerance}}}};

  const double t0 = now();
  try {
    const AuditReport rep = audit(man, ao);
    env.report = to_json(rep);
    auto add = [&](const std::string& name, bool ok) {
      Expectation e;
      e.name = name;
      e.value = ok ? 1.0 : 0.0;
      e.expected = 1.0;
      e.provenance = "PAPER";
      e.passed = ok;
      env.expectations.push_back(e);
    };
    add("theorem_bound", rep.theorem_ok);
    if (rep.jung) {
      add("jung_lower", rep.jung->lower_ok);
      add("jung_upper", rep.jung->upper_ok);
    }
  } catch (const std::exception& e) {
    env.error = e.what();
  }
  env.duration = now() - t0;
  return env;
}

ReportEnvelope run_custom_curve(const std::string& curve_path, const RunOptions& opts) {
  const std::string task = opts.task.empty() ? "bow" : opts.task;
  if (task != "bow" && task != "planarity") throw UsageError("--curve supports --task bow or planarity");
  ReportEnvelope env;
  env.scenario = "custom:" + curve_path;
  env.seed = opts.seed;
  CurveFile file = read_curve_file(curve_path);

  std::optional<double> r = file.r;
  for (const auto& [k, v] : opts.params) {
    if (k != "r") throw UsageError("unknown parameter '" + k + "' for --curve");
    try {
      r = std::stod(v);
    } catch (const std::exception&) {
      throw UsageError("--set r: expected a number");
    }
  }
  double near_factor = 1e-3;
  double margin_floor = -1e-4;
  for (const auto& [k, v] : opts.tol_overrides) {
    if (k == "near_equality_factor") near_factor = v;
    else if (k == "bow_margin") margin_floor = v;
    else throw UsageError("unknown tolerance override '" + k + "' for --curve");
  }
  env.parameters = {{"task", task}, {"kappa", file.curve.space().kappa()}, {"n", file.curve.space().dim()},
                    {"points", file.curve.size()}};
  if (r) env.parameters["r"] = *r;

  const double t0 = now();
  try {
    DiscreteCurve curve = file.curve;
    if (!curve.is_unit_speed()) {
      curve = resample_unit_speed(curve);
      env.report["resampled"] = true;
    }
    if (task == "bow") {
      if (!r) throw UsageError("bow task needs the comparison radius: header field \"r\" or --set r=...");
      const BowReport rep = bow_chord_check(curve, *r, near_factor);
      env.report["bow"] = to_json(rep);
      Expectation e;
      e.name = "bow_margin";
      e.value = rep.margin;
      e.expected = margin_floor;
      e.comparison = Comparison::greater;
      e.provenance = "PAPER";
      e.passed = rep.margin > margin_floor;
      env.expectations.push_back(e);
    } else {
      env.report["planarity"] = to_json(planar_circle_defect(curve));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    env.error = e.what();
  }
  env.duration = now() - t0;
  return env;
}

}  // namespace focalkit::cli
