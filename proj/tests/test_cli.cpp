#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "focalkit/error.hpp"
#include "runner.hpp"

using namespace focalkit;
using namespace focalkit::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "focalkit_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FOCALKIT_EXE) + " " + args + " --quiet > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string usage_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

json without_duration(json j) {
  j.erase("duration_seconds");
  return j;
}

}  // namespace

TEST_CASE("built-in scenarios") {
  const ReportEnvelope torus = run_scenario("clifford-torus", {});
  CHECK(torus.passed());
  const std::set<std::string> tags{"PAPER", "DERIVED", "TRIVIAL"};
  for (const auto& e : torus.expectations) CHECK(tags.count(e.provenance) == 1);
  const json j = torus.to_json();
  CHECK(j["schema"] == "focalkit/1");
  CHECK(j["version"] == kVersion);
  CHECK(j["seed"] == 17);
  CHECK(j["report"]["extrinsic_diameter"]["value"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));

  RunOptions sphere;
  sphere.params = {{"rho", "1"}, {"kappa", "0"}, {"m", "2"}, {"n", "3"}};
  const ReportEnvelope us = run_scenario("umbilical-sphere", sphere);
  CHECK(us.passed());
  CHECK(us.to_json()["report"]["ratio"].get<double>() == doctest::Approx(2.0).epsilon(1e-4));

  RunOptions cp2;
  cp2.params = {{"field", "C"}, {"l", "2"}};
  CHECK(run_scenario("veronese", cp2).passed());

  CHECK(run_scenario("helix-bow", {}).passed());
  CHECK(run_scenario("half-circle-bow", {}).passed());
}

TEST_CASE("usage errors") {
  CHECK(usage_message([] { run_scenario("no-such-scenario", {}); }).find("unknown scenario") != std::string::npos);
  RunOptions bad;
  bad.params = {{"bogus", "1"}};
  CHECK(usage_message([] {
          RunOptions o;
          o.params = {{"bogus", "1"}};
          run_scenario("clifford-torus", o);
        }).find("bogus") != std::string::npos);
  CHECK(usage_message([] {
          RunOptions o;
          o.tol_overrides = {{"not_a_key", 1.0}};
          run_scenario("clifford-torus", o);
        }).find("not_a_key") != std::string::npos);
}

TEST_CASE("tolerance overrides reach the expectations") {
  RunOptions o;
  o.tol_overrides = {{"ratio_above_two", 3.0}};
  const ReportEnvelope env = run_scenario("clifford-torus", o);
  CHECK_FALSE(env.passed());
  int failed = 0;
  for (const auto& e : env.expectations)
    if (!e.passed) {
      ++failed;
      CHECK(e.name == "ratio_above_two");
    }
  CHECK(failed == 1);
}

TEST_CASE("immersion spec schema errors name the path") {
  CHECK(usage_message([] { immersion_from_spec(json::parse(R"({"dim": 2})")); }).find("/ambient") != std::string::npos);
  CHECK(usage_message([] { immersion_from_spec(json::parse(R"({"ambient": {"n": 3}, "dim": 2})")); })
            .find("/ambient/kappa") != std::string::npos);
  CHECK(usage_message([] {
          immersion_from_spec(json::parse(R"({"ambient": {"kappa": 0, "n": 3}, "dim": 2,
                                              "chart": {"family": "ellipsoid", "params": {"axes": [1, "x", 2]}}})"));
        }).find("/chart/params/axes/1") != std::string::npos);
  CHECK(usage_message([] {
          immersion_from_spec(json::parse(R"({"ambient": {"kappa": 0, "n": 4}, "dim": 2,
                                              "tabulated": {"shape": [3, 3], "values": [[1, 0, 0, 0]]}})"));
        }).find("/tabulated/values") != std::string::npos);
  CHECK(usage_message([] {
          immersion_from_spec(json::parse(R"({"ambient": {"kappa": 0, "n": 3}, "dim": 2, "chart": {"family": "torus"}})"));
        }).find("/chart/family") != std::string::npos);
}

TEST_CASE("custom immersions") {
  const fs::path spec = scratch("ellipsoid.json");
  write_text(spec, R"({"ambient": {"kappa": 0, "n": 3}, "dim": 2,
                       "chart": {"family": "ellipsoid", "params": {"axes": [1, 1, 1.3]}}})");
  const ReportEnvelope env = run_custom_immersion(spec.string(), {});
  REQUIRE_FALSE(env.error);
  CHECK(env.passed());
  CHECK(env.report["ratio"].get<double>() - 2.0 > 1e-3);

  const fs::path bad = scratch("degenerate.json");
  json vals = json::array();
  for (int i = 0; i < 16; ++i) vals.push_back({1.0, 0.0, 0.0, 0.0});
  write_text(bad, json{{"ambient", {{"kappa", 0}, {"n", 4}}}, {"dim", 2}, {"tabulated", {{"shape", {4, 4}}, {"values", vals}}}}
                      .dump());
  const ReportEnvelope denv = run_custom_immersion(bad.string(), {});
  REQUIRE(denv.error);
  CHECK(denv.error->find("rank-deficient") != std::string::npos);
  CHECK(denv.error->find("parameters (") != std::string::npos);
  CHECK_FALSE(denv.passed());

  const ReportEnvelope torus = run_custom_immersion(FOCALKIT_SAMPLES_DIR "/torus_spec.json", {});
  CHECK(torus.passed());
  CHECK(torus.report["manifold"] == "clifford-torus-from-spec");
}

TEST_CASE("curve files round-trip") {
  const DiscreteCurve c = half_circle_curve(1, 3, 0.9, 257);
  const fs::path pj = scratch("curve.json");
  const fs::path pc = scratch("curve.csv");
  write_curve_json(pj.string(), c, 0.9);
  write_curve_csv(pc.string(), c, 0.9);
  for (const fs::path& p : {pj, pc}) {
    const CurveFile f = read_curve_file(p.string());
    REQUIRE(f.r);
    CHECK(*f.r == 0.9);
    CHECK(f.curve.space() == c.space());
    REQUIRE(f.curve.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(f.curve.points()[i] == c.points()[i]);
  }
  // Object form.
  const CurveFile obj = parse_curve_json(json::parse(R"({"kappa": 0, "n": 2, "points": [[0, 0], [1, 0], [2, 0]]})"));
  CHECK(obj.curve.size() == 3);
  CHECK_FALSE(obj.r);

  CHECK(usage_message([] { parse_curve_json(json::parse(R"([{"kappa": 0, "n": 2}, {"coords": [0, 0, 1]}])")); })
            .find("/1/coords") != std::string::npos);
  CHECK(usage_message([] { parse_curve_json(json::parse(R"([{"n": 2}])")); }).find("/0/kappa") != std::string::npos);
  CHECK(usage_message([] { parse_curve_csv("kappa,n\n0,2\n1,2\nx,3\n"); }).find("line 4") != std::string::npos);
}

TEST_CASE("custom curves") {
  const ReportEnvelope half = run_custom_curve(FOCALKIT_SAMPLES_DIR "/half_circle.json", {});
  CHECK(half.passed());
  CHECK(std::abs(half.report["bow"]["margin"].get<double>()) < 1e-5);

  const fs::path p = scratch("no_r.json");
  write_curve_json(p.string(), half_circle_curve(0, 2, 1.0, 401));
  CHECK(usage_message([&] { run_custom_curve(p.string(), {}); }).find("r") != std::string::npos);
  RunOptions with_r;
  with_r.params = {{"r", "1"}};
  CHECK(run_custom_curve(p.string(), with_r).passed());
  RunOptions plan;
  plan.task = "planarity";
  const ReportEnvelope pr = run_custom_curve(p.string(), plan);
  CHECK(pr.report["planarity"]["plane_residual"].get<double>() < 1e-8);
}

TEST_CASE("determinism") {
  RunOptions o;
  o.seed = 5;
  o.params = {{"field", "R"}, {"l", "2"}};
  const std::string a = without_duration(run_scenario("veronese", o).to_json()).dump(2);
  const std::string b = without_duration(run_scenario("veronese", o).to_json()).dump(2);
  CHECK(a == b);
}

TEST_CASE("executable exit codes and byte-identical reruns") {
  CHECK(run_cli("--scenario clifford-torus") == 0);
  CHECK(run_cli("--scenario clifford-torus --tol-overrides ratio_above_two=3") == 1);
  CHECK(run_cli("--scenario does-not-exist") == 2);
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("--scenario clifford-torus --tol-overrides missing_equals") == 2);
  CHECK(run_cli("--scenario clifford-torus --spec x.json") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("--list") == 0);

  const fs::path bad = scratch("bad_schema.json");
  write_text(bad, R"({"ambient": {"kappa": 7, "n": 3}, "dim": 2, "chart": {"family": "clifford-torus"}})");
  CHECK(run_cli("--spec " + bad.string()) == 2);

  const fs::path o1 = scratch("run1.json"), o2 = scratch("run2.json");
  REQUIRE(run_cli("--scenario umbilical-sphere --seed 9 --json-out " + o1.string()) == 0);
  REQUIRE(run_cli("--scenario umbilical-sphere --seed 9 --json-out " + o2.string()) == 0);
  const json j1 = json::parse(read_text(o1)), j2 = json::parse(read_text(o2));
  CHECK(j1["seed"] == 9);
  CHECK(without_duration(j1).dump(2) == without_duration(j2).dump(2));
}
