#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "runner.hpp"

using namespace focalkit::cli;

namespace {

std::pair<std::string, std::string> split_pair(const std::string& kv, const char* flag) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError(std::string(flag) + " expects key=value, got '" + kv + "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"focalkit: focal radius, diameter and Bow-lemma audits"};
  std::string scenario, spec, curve, task, json_out;
  std::uint64_t seed = 17;
  std::vector<std::string> tol_pairs, set_pairs;
  std::size_t samples = 0;
  bool quiet = false, list = false;

  auto* src = app.add_option("--scenario", scenario, "Built-in scenario name");
  app.add_option("--spec", spec, "Immersion spec (JSON)")->excludes(src);
  app.add_option("--curve", curve, "Curve file (JSON or CSV)")->excludes(src);
  app.add_option("--task", task, "audit, bow or planarity")->check(CLI::IsMember({"audit", "bow", "planarity"}));
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--tol-overrides", tol_pairs, "Tolerance or budget override key=value (repeatable)");
  app.add_option("--set", set_pairs, "Scenario parameter key=value (repeatable)");
  app.add_option("--samples", samples, "Sample budget for curvature and diameter searches");
  app.add_option("--json-out", json_out, "Write the report here instead of stdout");
  app.add_flag("--quiet", quiet, "Suppress the summary on stderr");
  app.add_flag("--list", list, "List built-in scenarios");
  app.get_option("--spec")->excludes("--curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& s : builtin_scenarios()) {
      std::cout << s.name << "  " << s.summary;
      if (!s.parameters.empty()) {
        std::cout << "  [";
        for (std::size_t i = 0; i < s.parameters.size(); ++i) std::cout << (i ? ", " : "") << s.parameters[i];
        std::cout << "]";
      }
      std::cout << "\n";
    }
    return 0;
  }

  ReportEnvelope env;
  try {
    RunOptions opts;
    opts.seed = seed;
    opts.task = task;
    if (app.count("--samples")) {
      if (samples == 0) throw UsageError("--samples must be positive");
      opts.samples = samples;
    }
    for (const auto& kv : tol_pairs) {
      auto [k, v] = split_pair(kv, "--tol-overrides");
      try {
        std::size_t pos = 0;
        opts.tol_overrides[k] = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw UsageError("--tol-overrides " + k + ": expected a number");
      }
    }
    for (const auto& kv : set_pairs) {
      auto [k, v] = split_pair(kv, "--set");
      opts.params[k] = v;
    }
    if (!scenario.empty()) {
      env = run_scenario(scenario, opts);
    } else if (!spec.empty()) {
      env = run_custom_immersion(spec, opts);
    } else if (!curve.empty()) {
      env = run_custom_curve(curve, opts);
    } else {
      throw UsageError("one of --scenario, --spec, --curve or --list is required");
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = env.to_json().dump(2) + "\n";
  if (json_out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(json_out);
    if (!out) {
      std::cerr << "cannot write " << json_out << "\n";
      return 2;
    }
    out << text;
  }

  if (env.error) std::cerr << "error: " << *env.error << "\n";
  for (const auto& e : env.expectations) {
    if (!e.passed) std::cerr << "FAIL " << e.describe() << "\n";
  }
  if (!quiet) {
    std::cerr << env.scenario << ": " << (env.passed() ? "passed" : "failed") << " (" << env.expectations.size()
              << " expectations, " << env.duration << " s)\n";
  }
  return env.passed() ? 0 : 1;
}
