#include "focalkit/audit.hpp"

#include <cmath>

namespace focalkit {

AuditReport audit(const ImmersedManifold& m, const AuditOptions& opts) {
  AuditReport rep;
  rep.manifold = m.name();
  rep.ambient = m.ambient().describe();
  rep.seed = m.config().seed;

  validate_immersion(m);

  rep.curvature = max_normal_curvature(m);
  rep.focal_radius = focal_radius(m, rep.curvature);
  rep.curvature_grid = rep.curvature.grid_points;
  rep.curvature_refine_evaluations = rep.curvature.refine_evaluations;
  if (!rep.curvature.converged) rep.notes.push_back("curvature refinement hit its budget");

  rep.diameter = extrinsic_diameter(m);
  rep.diameter_samples = rep.diameter.sampled_points;
  rep.diameter_refine_sweeps = rep.diameter.refine_sweeps;

  if (m.ambient().kappa() == 0) {
    rep.circumradius = circumradius(m);
    const double r = rep.circumradius->value;
    const double d = rep.diameter.value;
    rep.jung = JungFlags{std::sqrt(2.0) * r < d + opts.jung_tolerance, d <= 2.0 * r + opts.jung_tolerance};
  }

  if (rep.focal_radius.is_infinite()) {
    rep.ratio = 0.0;
    rep.theorem_ok = true;
    rep.notes.push_back("focal radius is infinite; the ratio is undefined");
  } else {
    rep.ratio = rep.diameter.value / rep.focal_radius.value();
    rep.equality_flag = std::abs(rep.ratio - 2.0) < opts.equality_tolerance;
    rep.theorem_ok = rep.ratio >= 2.0 - opts.theorem_tolerance;
  }

  const bool probe = opts.probe == ProbeMode::always || (opts.probe == ProbeMode::automatic && rep.equality_flag);
  if (probe && !rep.focal_radius.is_infinite()) {
    const double length = circle_from_radius(m.ambient().kappa(), rep.focal_radius.value()).length;
    rep.planar_geodesics =
        planar_geodesics_report(m, opts.probe_geodesics, length, m.config().seed, opts.probe_steps);
    for (const auto& note : rep.planar_geodesics->notes) rep.notes.push_back(note);
  }
  return rep;
}

}  // namespace focalkit
