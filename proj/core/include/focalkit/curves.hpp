#pragma once

// Discrete curves in a space form: geodesics of immersed submanifolds,
// curvature estimates, the half-circle chord comparison, and planar-circle
// diagnostics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "focalkit/immersion.hpp"
#include "focalkit/sampling.hpp"
#include "focalkit/spaceform.hpp"

namespace focalkit {

class DiscreteCurve {
 public:
  // Checks every point against the model (1e-9) and needs >= 3 points.
  DiscreteCurve(SpaceForm space, std::vector<VectorXd> points);

  const SpaceForm& space() const { return space_; }
  const std::vector<VectorXd>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const VectorXd& front() const { return points_.front(); }
  const VectorXd& back() const { return points_.back(); }

  // Cumulative length of the geodesic polygon through the points.
  const std::vector<double>& arclength() const { return arclength_; }
  double length() const { return arclength_.back(); }
  // All gaps within 2% of their mean.
  bool is_unit_speed() const { return unit_speed_; }
  double step() const { return step_; }

 private:
  SpaceForm space_;
  std::vector<VectorXd> points_;
  std::vector<double> arclength_;
  bool unit_speed_ = false;
  double step_ = 0.0;
};

// Equal-length resampling of the geodesic polygon (count points).
DiscreteCurve resample_unit_speed(const DiscreteCurve& curve, std::size_t count);
// Same number of points as the input.
DiscreteCurve resample_unit_speed(const DiscreteCurve& curve);

struct CurvatureEstimate {
  std::vector<double> values;
  std::vector<bool> low_confidence;  // one-sided endpoint estimates
  double max_interior() const;
  double max_all() const;
};

// Second differences over h^2 with the model normal removed. Needs a
// unit-speed curve with at least 5 points.
CurvatureEstimate discrete_curvature(const DiscreteCurve& curve);

struct PlanarityReport {
  double plane_residual = 0.0;  // max intrinsic distance to the fitted plane
  VectorXd center;              // model point (empty when the radius is infinite)
  double radius = 0.0;
  bool finite_radius = true;
  double circle_defect = 0.0;   // max |d(center, x_i) - radius|
  double curvature_mean = 0.0;
  double curvature_variance = 0.0;
  std::size_t points = 0;

  double max_residual() const { return std::max(plane_residual, circle_defect); }
};

// Needs >= 10 points. The fit is done after moving the cloud's mean to the
// base point, so the result does not depend on the ambient position.
PlanarityReport planar_circle_defect(const DiscreteCurve& curve);

struct BowReport {
  double r = 0.0;
  double length = 0.0;
  double half_circumference = 0.0;
  double chord = 0.0;
  double comparison_chord = 0.0;  // 2r, or 2(pi - r) on the sphere for r > pi/2
  double margin = 0.0;            // chord - comparison_chord
  // chord minus the chord of an arc of the actual length on the circle.
  double length_adjusted_margin = 0.0;
  double circle_curvature = 0.0;
  double max_curvature = 0.0;
  double curvature_tolerance = 0.0;
  double curvature_slack = 0.0;   // circle_curvature + tolerance - max_curvature
  bool near_equality = false;
  std::optional<PlanarityReport> planarity;
};

// Preconditions (DomainError naming the quantity on failure): unit-speed
// curve, length within 1% of half the circumference of the radius-r circle,
// max discrete curvature <= circle curvature + 10 h c + 1e-6.
BowReport bow_chord_check(const DiscreteCurve& curve, double r, double near_equality_factor = 1e-3);

struct GeodesicOptions {
  DiffMode mode = DiffMode::automatic;
  // Renormalize the velocity to unit speed after every step.
  bool renormalize = true;
};

struct GeodesicResult {
  DiscreteCurve curve;
  std::vector<VectorXd> params;
  double max_speed_drift = 0.0;  // before renormalization
};

// RK4 on (w, w') in chart parameters, with substeps where the chart is
// stretched; parameters are re-centered and the speed renormalized after
// every output step. u is a unit ambient tangent at the start point.
// Requires h <= length / 100.
GeodesicResult integrate_geodesic(const ImmersedManifold& m, const VectorXd& params, const VectorXd& u, double length,
                                  double h, const GeodesicOptions& opts = {});

struct PlanarGeodesicStats {
  int requested = 0;
  int succeeded = 0;
  double length = 0.0;
  double max_plane_residual = 0.0;
  double max_circle_defect = 0.0;
  double radius_mean = 0.0;
  double radius_dispersion = 0.0;  // max - min of the fitted radii
  double max_closure_gap = 0.0;    // distance between start and end points
  std::vector<double> radii;
  std::vector<std::string> notes;
};

PlanarGeodesicStats planar_geodesics_report(const ImmersedManifold& m, int num_geodesics, double length,
                                            std::uint64_t seed = 17, int steps = 400);

// Curve generators.
DiscreteCurve half_circle_curve(int kappa, int n, double r, std::size_t count);
// Circle of radius r in the plane of the first two axes, arc length `length`.
DiscreteCurve circle_arc_curve(int kappa, int n, double r, double length, std::size_t count);
DiscreteCurve helix_curve(double curvature, double torsion, double length, std::size_t count);

// Integrates the Frenet system in M^3(kappa) for unit-speed curves with
// curvature k(s) <= max_curvature and torsion tau(s); `deficit` scales how
// far k drops below the bound, `torsion` the torsion amplitude.
struct FrenetProfile {
  double max_curvature = 0.0;
  double deficit = 0.0;
  double torsion = 0.0;
  std::vector<double> phases;  // random shape coefficients
};

DiscreteCurve frenet_curve(int kappa, const FrenetProfile& profile, double length, std::size_t count,
                           const MatrixXd& start_frame);

// A random curve for the chord comparison with r: length = half the
// circumference, curvature at most that of the circle. A fraction of draws
// sit near the equality case (log-uniform deficit and torsion).
DiscreteCurve random_bow_curve(int kappa, double r, Rng& rng, std::size_t count = 401,
                               double near_equality_fraction = 0.3);

}  // namespace focalkit
