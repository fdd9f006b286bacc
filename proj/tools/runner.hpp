#pragma once

// Scenario runner behind the focalkit executable: built-in scenarios,
// user immersion specs and curve files, and the JSON report envelope.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "focalkit/audit.hpp"
#include "focalkit/curves.hpp"

namespace focalkit::cli {

using nlohmann::json;

inline constexpr const char* kSchema = "focalkit/1";
inline constexpr const char* kVersion = "0.1.0";

// Bad flags, unknown scenario or key, schema violations. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Comparison { near, greater, less };

struct Expectation {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::near;
  std::string provenance;  // PAPER, DERIVED or TRIVIAL
  bool passed = false;

  std::string describe() const;
};

struct RunOptions {
  std::uint64_t seed = 17;
  std::map<std::string, double> tol_overrides;
  std::map<std::string, std::string> params;  // --set
  std::optional<std::size_t> samples;
  std::string task;  // audit, bow, planarity
};

struct ReportEnvelope {
  std::string scenario;
  std::uint64_t seed = 17;
  json config = json::object();
  json parameters = json::object();
  json report = json::object();
  std::vector<Expectation> expectations;
  std::optional<std::string> error;
  double duration = 0.0;

  bool passed() const;
  json to_json() const;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> parameters;
};

const std::vector<ScenarioInfo>& builtin_scenarios();

ReportEnvelope run_scenario(const std::string& name, const RunOptions& opts);
ReportEnvelope run_custom_immersion(const std::string& spec_path, const RunOptions& opts);
ReportEnvelope run_custom_curve(const std::string& curve_path, const RunOptions& opts);

// Immersion spec (JSON object); throws UsageError naming the offending path.
ImmersedManifold immersion_from_spec(const json& spec);

struct CurveFile {
  DiscreteCurve curve;
  std::optional<double> r;
};

// JSON ([header, {"coords": [...]}, ...] or {"kappa", "n", "points"}) or CSV
// (header names line, header values line, one coordinate row per point).
CurveFile read_curve_file(const std::string& path);
CurveFile parse_curve_json(const json& doc);
CurveFile parse_curve_csv(const std::string& text);
void write_curve_json(const std::string& path, const DiscreteCurve& curve, std::optional<double> r = {});
void write_curve_csv(const std::string& path, const DiscreteCurve& curve, std::optional<double> r = {});

json to_json(const AuditReport& r);
json to_json(const BowReport& r);
json to_json(const PlanarityReport& r);
json to_json(const PlanarGeodesicStats& s);

}  // namespace focalkit::cli
