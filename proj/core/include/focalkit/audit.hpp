#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "focalkit/curves.hpp"
#include "focalkit/immersion.hpp"

namespace focalkit {

enum class ProbeMode { automatic, always, never };

struct AuditOptions {
  double equality_tolerance = 5e-3;
  double theorem_tolerance = 5e-3;
  double jung_tolerance = 1e-6;
  ProbeMode probe = ProbeMode::automatic;
  int probe_geodesics = 20;
  int probe_steps = 400;
};

struct JungFlags {
  bool lower_ok = false;  // sqrt(2) R < D + tol
  bool upper_ok = false;  // D <= 2R + tol
};

struct AuditReport {
  std::string manifold;
  std::string ambient;
  FocalDistance focal_radius = FocalDistance::infinite();
  CurvatureMax curvature;
  DiameterResult diameter;
  std::optional<CircumradiusResult> circumradius;
  double ratio = 0.0;  // diameter / focal radius (0 when the focal radius is infinite)
  bool equality_flag = false;
  bool theorem_ok = false;
  std::optional<JungFlags> jung;
  std::optional<PlanarGeodesicStats> planar_geodesics;

  // Provenance.
  std::uint64_t seed = 0;
  std::size_t curvature_grid = 0;
  std::size_t diameter_samples = 0;
  int curvature_refine_evaluations = 0;
  int diameter_refine_sweeps = 0;
  std::vector<std::string> notes;
};

// Focal radius, diameter, circumradius (kappa = 0), the ratio and its
// checks. The planar-geodesic probe runs on near-equality (or always /
// never per options) with geodesics as long as the circle whose radius is
// the focal radius.
AuditReport audit(const ImmersedManifold& m, const AuditOptions& opts = {});

}  // namespace focalkit
