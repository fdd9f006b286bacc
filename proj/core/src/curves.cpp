#include "focalkit/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "focalkit/circle_fit.hpp"
#include "focalkit/error.hpp"
#include "focalkit/parallel.hpp"

namespace focalkit {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Point at fraction f of the geodesic from a to b.
VectorXd geodesic_lerp(const SpaceForm& s, const VectorXd& a, const VectorXd& b, double f) {
  if (s.kappa() == 0) return (1.0 - f) * a + f * b;
  const double d = s.distance(a, b);
  if (d < 1e-12) return s.project((1.0 - f) * a + f * b);
  if (s.kappa() == 1) return s.project((std::sin((1.0 - f) * d) * a + std::sin(f * d) * b) / std::sin(d));
  return s.project((std::sinh((1.0 - f) * d) * a + std::sinh(f * d) * b) / std::sinh(d));
}

}  // namespace

DiscreteCurve::DiscreteCurve(SpaceForm space, std::vector<VectorXd> points)
    : space_(space), points_(std::move(points)) {
  if (points_.size() < 3) throw DomainError("a discrete curve needs at least 3 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double res = space_.constraint_residual(points_[i]);
    if (!(res <= 1e-9)) {
      throw DomainError("curve point " + std::to_string(i) + " is not in " + space_.describe() + " (residual " +
                        fmt(res) + ")");
    }
  }
  arclength_.assign(points_.size(), 0.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double g = space_.distance(points_[i - 1], points_[i]);
    arclength_[i] = arclength_[i - 1] + g;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  step_ = arclength_.back() / static_cast<double>(points_.size() - 1);
  unit_speed_ = step_ > 0.0 && hi <= 1.02 * step_ && lo >= 0.98 * step_;
}

DiscreteCurve resample_unit_speed(const DiscreteCurve& curve, std::size_t count) {
  if (count < 3) throw DomainError("resampling needs at least 3 points");
  const auto& s = curve.arclength();
  const auto& p = curve.points();
  const double total = curve.length();
  if (!(total > 0.0)) throw DomainError("cannot resample a curve of zero length");
  std::vector<VectorXd> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < count; ++j) {
    if (j + 1 == count) {
      out.push_back(p.back());
      break;
    }
    const double t = total * static_cast<double>(j) / static_cast<double>(count - 1);
    while (seg + 2 < s.size() && s[seg + 1] <= t) ++seg;
    const double gap = s[seg + 1] - s[seg];
    const double f = gap > 0.0 ? std::clamp((t - s[seg]) / gap, 0.0, 1.0) : 0.0;
    if (f == 0.0) {
      out.push_back(p[seg]);
    } else {
      out.push_back(geodesic_lerp(curve.space(), p[seg], p[seg + 1], f));
    }
  }
  return DiscreteCurve(curve.space(), std::move(out));
}

DiscreteCurve resample_unit_speed(const DiscreteCurve& curve) { return resample_unit_speed(curve, curve.size()); }

double CurvatureEstimate::max_interior() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!low_confidence[i]) m = std::max(m, values[i]);
  return m;
}

double CurvatureEstimate::max_all() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

CurvatureEstimate discrete_curvature(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 5) throw DomainError("discrete_curvature needs at least 5 points (got " + std::to_string(n) + ")");
  if (!curve.is_unit_speed()) throw DomainError("discrete_curvature needs a unit-speed curve; resample it first");
  const SpaceForm& s = curve.space();
  const auto& x = curve.points();
  // h^2 from the coordinate chords on both sides; exact for circles.
  auto chord2 = [&](std::size_t i, std::size_t j) {
    const VectorXd d = x[i] - x[j];
    return s.inner(d, d);
  };
  CurvatureEstimate est;
  est.values.resize(n);
  est.low_confidence.assign(n, false);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h2 = 0.5 * (chord2(i + 1, i) + chord2(i, i - 1));
    const VectorXd a = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / h2;
    est.values[i] = s.norm(s.tangent_part(x[i], a));
  }
  auto one_sided = [&](std::size_t i0, int dir) {
    auto at = [&](int k) { return x[static_cast<std::size_t>(static_cast<int>(i0) + dir * k)]; };
    const VectorXd d = at(1) - at(0);
    const double h2 = s.inner(d, d);
    const VectorXd a = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
    return s.norm(s.tangent_part(at(0), a));
  };
  est.values[0] = one_sided(0, 1);
  est.values[n - 1] = one_sided(n - 1, -1);
  est.low_confidence[0] = est.low_confidence[n - 1] = true;
  return est;
}

namespace {

// Max intrinsic distance from the points to the best totally geodesic
// subspace: affine of dimension dim (kappa = 0) or the model's section by a
// linear subspace of dimension dim + 1 (kappa = +-1). Returns the basis of
// that subspace as columns (kappa = 0: about the mean, which is zero here).
struct SubspaceFit {
  MatrixXd basis;
  double residual = 0.0;
  VectorXd singular;
};

SubspaceFit fit_subspace(const SpaceForm& s, const std::vector<VectorXd>& y, int dim) {
  const int d = s.coord_dim();
  const int cols = s.kappa() == 0 ? dim : dim + 1;
  MatrixXd data(static_cast<Eigen::Index>(y.size()), d);
  for (std::size_t i = 0; i < y.size(); ++i) data.row(static_cast<Eigen::Index>(i)) = y[i].transpose();
  Eigen::JacobiSVD<MatrixXd> svd(data, Eigen::ComputeThinV);
  SubspaceFit fit;
  fit.singular = svd.singularValues();
  const int take = std::min(cols, d);
  fit.basis = svd.matrixV().leftCols(take);
  if (take == d) return fit;

  if (s.kappa() == -1) {
    MatrixXd eb = fit.basis;
    eb.row(0) *= -1.0;
    const MatrixXd g = fit.basis.transpose() * eb;
    const Eigen::LDLT<MatrixXd> ldlt(g);
    for (const auto& x : y) {
      VectorXd ex = x;
      ex[0] = -ex[0];
      const VectorXd perp = x - fit.basis * ldlt.solve(fit.basis.transpose() * ex);
      fit.residual = std::max(fit.residual, std::asinh(s.norm(perp)));
    }
  } else {
    for (const auto& x : y) {
      const double perp = (x - fit.basis * (fit.basis.transpose() * x)).norm();
      fit.residual = std::max(fit.residual, s.kappa() == 1 ? std::asin(std::min(1.0, perp)) : perp);
    }
  }
  return fit;
}

double minkowski(const VectorXd& a, const VectorXd& b) {
  return a.tail(a.size() - 1).dot(b.tail(b.size() - 1)) - a[0] * b[0];
}

}  // namespace

PlanarityReport planar_circle_defect(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 10) throw DomainError("planar_circle_defect needs at least 10 points (got " + std::to_string(n) + ")");
  const SpaceForm& s = curve.space();
  const int d = s.coord_dim();
  const auto& x = curve.points();

  PlanarityReport rep;
  rep.points = n;

  // Canonical position: the normalized mean goes to the base point.
  VectorXd sum = VectorXd::Zero(d);
  for (const auto& p : x) sum += p;
  VectorXd shift = VectorXd::Zero(d);
  MatrixXd q = MatrixXd::Identity(d, d);
  if (s.kappa() == 0) {
    shift = sum / static_cast<double>(n);
  } else if (s.kappa() == 1) {
    const VectorXd mean = sum.norm() > 1e-12 ? VectorXd(sum.normalized()) : x.front();
    q = isometry_to_base(s, mean);
  } else {
    q = isometry_to_base(s, sum / std::sqrt(-minkowski(sum, sum)));
  }
  std::vector<VectorXd> y;
  y.reserve(n);
  for (const auto& p : x) y.push_back(s.kappa() == 0 ? VectorXd(p - shift) : s.project(q * p));
  // q is an involution for kappa = +1 and a boost for kappa = -1.
  auto to_ambient = [&](const VectorXd& v) -> VectorXd {
    if (s.kappa() == 0) return v + shift;
    if (s.kappa() == 1) return q.transpose() * v;
    MatrixXd qinv = q;
    qinv.block(0, 1, 1, d - 1) *= -1.0;
    qinv.block(1, 0, d - 1, 1) *= -1.0;
    return qinv * v;
  };

  const SubspaceFit plane = fit_subspace(s, y, 2);
  rep.plane_residual = plane.residual;

  const double tiny = 1e-12 * std::max(plane.singular[0], 1e-300);
  const int line_index = s.kappa() == 0 ? 1 : 2;
  const bool collinear = plane.singular.size() <= line_index || plane.singular[line_index] <= tiny;

  if (s.kappa() == 0) {
    if (collinear) {
      rep.finite_radius = false;
      rep.radius = std::numeric_limits<double>::infinity();
      rep.plane_residual = 0.0;
      rep.circle_defect = fit_subspace(s, y, 1).residual;
    } else {
      std::vector<Eigen::Vector2d> z;
      z.reserve(n);
      for (const auto& p : y) z.emplace_back(plane.basis.col(0).dot(p), plane.basis.col(1).dot(p));
      const Circle2 c = circle_fit_geometric(z, circle_fit_hyper(z));
      if (!c.finite) {
        rep.finite_radius = false;
        rep.radius = std::numeric_limits<double>::infinity();
        rep.circle_defect = fit_subspace(s, y, 1).residual;
      } else {
        rep.radius = c.radius;
        rep.center = to_ambient(plane.basis.col(0) * c.center.x() + plane.basis.col(1) * c.center.y());
      }
    }
  } else {
    // Orthonormal basis of the 3-space in the model's inner product.
    MatrixXd b = plane.basis;
    if (s.kappa() == -1) {
      MatrixXd eb = b;
      eb.row(0) *= -1.0;
      const MatrixXd g = b.transpose() * eb;
      const VectorXd e0 = s.base_point();
      VectorXd t0 = b * Eigen::LDLT<MatrixXd>(g).solve(eb.transpose() * e0);
      const double tt = minkowski(t0, t0);
      if (!(tt < 0.0)) throw DomainError("planar_circle_defect: fitted 3-space is not of Lorentzian signature");
      t0 /= std::sqrt(-tt);
      if (t0[0] < 0.0) t0 = -t0;
      MatrixXd ob(d, 3);
      ob.col(0) = t0;
      int filled = 1;
      for (int c = 0; c < 3 && filled < 3; ++c) {
        VectorXd v = b.col(c);
        v += minkowski(t0, v) * t0;
        for (int k = 1; k < filled; ++k) v -= minkowski(ob.col(k), v) * ob.col(k);
        const double vv = minkowski(v, v);
        if (vv < 1e-10) continue;
        ob.col(filled++) = v / std::sqrt(vv);
      }
      if (filled < 3) throw DomainError("planar_circle_defect: degenerate point cloud");
      b = ob;
    }
    std::vector<Eigen::Vector3d> z;
    z.reserve(n);
    for (const auto& p : y) {
      Eigen::Vector3d c;
      if (s.kappa() == 1) {
        c = (b.transpose() * p);
        c.normalize();
      } else {
        c = Eigen::Vector3d(-minkowski(b.col(0), p), minkowski(b.col(1), p), minkowski(b.col(2), p));
        c[0] = std::sqrt(1.0 + c.tail<2>().squaredNorm());
      }
      z.push_back(c);
    }
    const ModelCircle mc = model_circle_fit(s.kappa(), z);
    if (!mc.finite) {
      rep.finite_radius = false;
      rep.radius = std::numeric_limits<double>::infinity();
      rep.circle_defect = fit_subspace(s, y, 1).residual;
    } else {
      rep.radius = mc.radius;
      rep.center = to_ambient(s.project(b * mc.center));
    }
  }

  if (rep.finite_radius) {
    for (const auto& p : x) rep.circle_defect = std::max(rep.circle_defect, std::abs(s.distance(rep.center, p) - rep.radius));
  }

  if (n >= 5) {
    const DiscreteCurve even = curve.is_unit_speed() ? curve : resample_unit_speed(curve);
    const CurvatureEstimate est = discrete_curvature(even);
    double sum_k = 0.0, sum_k2 = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < est.values.size(); ++i) {
      if (est.low_confidence[i]) continue;
      sum_k += est.values[i];
      ++cnt;
    }
    rep.curvature_mean = sum_k / static_cast<double>(cnt);
    for (std::size_t i = 0; i < est.values.size(); ++i) {
      if (est.low_confidence[i]) continue;
      const double dk = est.values[i] - rep.curvature_mean;
      sum_k2 += dk * dk;
    }
    rep.curvature_variance = sum_k2 / static_cast<double>(cnt);
  }
  return rep;
}

BowReport bow_chord_check(const DiscreteCurve& curve, double r, double near_equality_factor) {
  if (!curve.is_unit_speed()) throw DomainError("bow_chord_check: curve is not unit speed; resample it first");
  const int kappa = curve.space().kappa();
  const GeodesicCircle circ = circle_from_radius(kappa, r);

  BowReport rep;
  rep.r = r;
  rep.length = curve.length();
  rep.half_circumference = 0.5 * circ.length;
  if (std::abs(rep.length - rep.half_circumference) > 0.01 * rep.half_circumference) {
    throw DomainError("bow_chord_check: curve length " + fmt(rep.length) + " is not within 1% of the half circumference " +
                      fmt(rep.half_circumference));
  }

  rep.circle_curvature = std::abs(circ.curvature);
  rep.max_curvature = discrete_curvature(curve).max_all();
  rep.curvature_tolerance = 10.0 * curve.step() * rep.circle_curvature + 1e-6;
  rep.curvature_slack = rep.circle_curvature + rep.curvature_tolerance - rep.max_curvature;
  if (rep.curvature_slack < 0.0) {
    throw DomainError("bow_chord_check: max discrete curvature " + fmt(rep.max_curvature) + " exceeds the circle curvature " +
                      fmt(rep.circle_curvature) + " plus tolerance " + fmt(rep.curvature_tolerance));
  }

  rep.chord = curve.space().distance(curve.front(), curve.back());
  // On the sphere a circle of radius r > pi/2 is the circle of radius
  // pi - r about the antipode, and its half-circle chord is 2(pi - r).
  rep.comparison_chord = (kappa == 1 && r > std::numbers::pi / 2) ? 2.0 * (std::numbers::pi - r) : 2.0 * r;
  rep.margin = rep.chord - rep.comparison_chord;
  rep.length_adjusted_margin = rep.chord - circle_chord(kappa, r, std::min(rep.length, rep.half_circumference));
  rep.near_equality = rep.margin < near_equality_factor * r;
  if (rep.near_equality && curve.size() >= 10) rep.planarity = planar_circle_defect(curve);
  return rep;
}

namespace {

struct GeoState {
  VectorXd w;
  VectorXd v;
};

// Horizontal part of a parameter velocity: V V^T v with V the eigenvectors
// behind param_dirs (whose columns have squared norms 1/lambda).
VectorXd frame_coords(const TangentFrame& f, const VectorXd& v) {
  VectorXd y(f.param_dirs.cols());
  for (Eigen::Index c = 0; c < y.size(); ++c) y[c] = f.param_dirs.col(c).dot(v) / f.param_dirs.col(c).squaredNorm();
  return y;
}

}  // namespace

GeodesicResult integrate_geodesic(const ImmersedManifold& m, const VectorXd& params, const VectorXd& u, double length,
                                  double h, const GeodesicOptions& opts) {
  if (!(length > 0.0)) throw DomainError("integrate_geodesic: length must be positive");
  if (!(h > 0.0) || h > length / 100.0 * (1.0 + 1e-12)) {
    throw DomainError("integrate_geodesic: step " + fmt(h) + " exceeds length/100 = " + fmt(length / 100.0));
  }
  const SpaceForm& amb = m.ambient();
  if (u.size() != amb.coord_dim()) throw DomainError("integrate_geodesic: direction has the wrong length");

  const auto steps = static_cast<std::size_t>(std::ceil(length / h - 1e-9));
  const double dt = length / static_cast<double>(steps);

  auto frame_at = [&](const VectorXd& w, std::size_t step) {
    try {
      return tangent_frame(m, w, opts.mode);
    } catch (const ImmersionError& e) {
      throw IntegrationError("geodesic left the regular part of the chart at step " + std::to_string(step) + ": " +
                             e.what());
    }
  };

  GeoState st;
  st.w = m.domain().canonical(params);
  {
    const TangentFrame f = frame_at(st.w, 0);
    VectorXd y(f.basis.cols());
    for (Eigen::Index c = 0; c < y.size(); ++c) y[c] = amb.inner(f.basis.col(c), u);
    const double off = amb.norm(u - f.basis * y);
    if (off > 1e-6 * std::max(1.0, amb.norm(u))) {
      throw DomainError("integrate_geodesic: direction is not tangent to " + m.name() + " (off by " + fmt(off) + ")");
    }
    if (std::abs(y.norm() - 1.0) > 1e-6) throw DomainError("integrate_geodesic: direction is not a unit vector");
    st.v = f.param_dirs * y;
  }

  std::size_t current_step = 0;
  auto deriv = [&](const GeoState& s) {
    // w' = v and Df v' = -(tangential part of D^2 f[v, v]): the image then
    // has purely normal acceleration whatever the kernel component of v.
    const TangentFrame f = frame_at(s.w, current_step);
    const VectorXd acc = m.second_derivative(s.w, s.v, opts.mode);
    VectorXd t(f.basis.cols());
    for (Eigen::Index c = 0; c < t.size(); ++c) t[c] = amb.inner(f.basis.col(c), acc);
    return GeoState{s.v, -(f.param_dirs * t)};
  };
  auto axpy = [](const GeoState& a, double k, const GeoState& b) { return GeoState{a.w + k * b.w, a.v + k * b.v}; };

  GeodesicResult res{DiscreteCurve(amb, {m.point(st.w), m.point(st.w), m.point(st.w)}), {}, 0.0};
  std::vector<VectorXd> pts;
  pts.reserve(steps + 1);
  pts.push_back(m.point(st.w));
  res.params.push_back(st.w);

  // Re-center: canonical parameters, velocity transferred accordingly.
  auto recenter = [&](GeoState& s) {
    if (m.domain().kind == DomainKind::homogeneous) {
      const double scale = s.w.norm();
      s.w /= scale;
      s.v /= scale;
    } else {
      s.w = m.domain().canonical(s.w);
    }
  };
  // Substeps keep the parameter displacement per RK4 step small where the
  // chart is stretched (large parameter speed).
  constexpr double max_param_step = 0.02;
  constexpr int max_substeps = 4096;

  for (current_step = 1; current_step <= steps; ++current_step) {
    GeoState next = st;
    double left = dt;
    int substeps = 0;
    while (left > 0.0) {
      const GeoState k1 = deriv(next);
      const double speed_w = k1.w.norm();
      double sub = left;
      if (speed_w * sub > max_param_step) {
        const double pieces = std::ceil(left * speed_w / max_param_step);
        sub = left / pieces;
      }
      if (++substeps > max_substeps) {
        throw IntegrationError("geodesic step " + std::to_string(current_step) + " needs more than " +
                               std::to_string(max_substeps) + " substeps (parameter speed " + fmt(speed_w) + ")");
      }
      const GeoState k2 = deriv(axpy(next, 0.5 * sub, k1));
      const GeoState k3 = deriv(axpy(next, 0.5 * sub, k2));
      const GeoState k4 = deriv(axpy(next, sub, k3));
      next = GeoState{next.w + sub / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
                      next.v + sub / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
      recenter(next);
      left = (sub == left) ? 0.0 : left - sub;
    }
    const TangentFrame f = frame_at(next.w, current_step);
    VectorXd y = frame_coords(f, next.v);
    const double speed = y.norm();
    res.max_speed_drift = std::max(res.max_speed_drift, std::abs(speed - 1.0));
    if (opts.renormalize) y /= speed;
    next.v = f.param_dirs * y;
    st = std::move(next);
    pts.push_back(f.point);
    res.params.push_back(st.w);
  }
  res.curve = DiscreteCurve(amb, std::move(pts));
  return res;
}

PlanarGeodesicStats planar_geodesics_report(const ImmersedManifold& m, int num_geodesics, double length,
                                            std::uint64_t seed, int steps) {
  if (num_geodesics < 1) throw DomainError("planar_geodesics_report: need at least one geodesic");
  if (steps < 100) throw DomainError("planar_geodesics_report: need at least 100 steps per geodesic");
  PlanarGeodesicStats stats;
  stats.requested = num_geodesics;
  stats.length = length;

  const auto count = static_cast<std::size_t>(num_geodesics);
  const std::vector<VectorXd> bases = m.domain().samples(count, derive_seed(seed, 1));
  const std::vector<VectorXd> dirs = low_discrepancy_directions(m.dim(), std::max(64, 4 * num_geodesics));

  struct Slot {
    bool ok = false;
    PlanarityReport planarity;
    double closure = 0.0;
    std::string note;
  };
  std::vector<Slot> slots(count);
  parallel_for(count, [&](std::size_t i) {
    Slot& slot = slots[i];
    try {
      Rng rng(derive_seed(seed, 1000 + i));
      std::uniform_int_distribution<std::size_t> pick(0, dirs.size() - 1);
      const VectorXd& y = dirs[pick(rng)];
      const TangentFrame f = tangent_frame(m, bases[i]);
      const VectorXd u = f.basis * y;
      const GeodesicResult g = integrate_geodesic(m, bases[i], u, length, length / steps);
      slot.planarity = planar_circle_defect(g.curve);
      slot.closure = m.ambient().distance(g.curve.front(), g.curve.back());
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.note = "geodesic " + std::to_string(i) + " skipped: " + e.what();
    }
  });

  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (const Slot& s : slots) {
    if (!s.ok) {
      stats.notes.push_back(s.note);
      continue;
    }
    ++stats.succeeded;
    stats.max_plane_residual = std::max(stats.max_plane_residual, s.planarity.plane_residual);
    stats.max_circle_defect = std::max(stats.max_circle_defect, s.planarity.circle_defect);
    stats.max_closure_gap = std::max(stats.max_closure_gap, s.closure);
    stats.radii.push_back(s.planarity.radius);
    lo = std::min(lo, s.planarity.radius);
    hi = std::max(hi, s.planarity.radius);
    sum += s.planarity.radius;
  }
  if (stats.succeeded > 0) {
    stats.radius_mean = sum / stats.succeeded;
    stats.radius_dispersion = hi - lo;
  }
  return stats;
}

DiscreteCurve circle_arc_curve(int kappa, int n, double r, double length, std::size_t count) {
  const SpaceForm s(kappa, n);
  const GeodesicCircle circ = circle_from_radius(kappa, r);
  const double planar_radius = circ.length / (2.0 * std::numbers::pi);
  const int shift = kappa == 0 ? 0 : 1;
  std::vector<VectorXd> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = length / planar_radius * static_cast<double>(i) / static_cast<double>(count - 1);
    VectorXd p = VectorXd::Zero(s.coord_dim());
    if (kappa == 1) p[0] = std::cos(r);
    if (kappa == -1) p[0] = std::cosh(r);
    p[shift] = planar_radius * std::cos(theta);
    p[shift + 1] = planar_radius * std::sin(theta);
    pts.push_back(s.project(p));
  }
  return DiscreteCurve(s, std::move(pts));
}

DiscreteCurve half_circle_curve(int kappa, int n, double r, std::size_t count) {
  return circle_arc_curve(kappa, n, r, 0.5 * circle_from_radius(kappa, r).length, count);
}

DiscreteCurve helix_curve(double curvature, double torsion, double length, std::size_t count) {
  const double w2 = curvature * curvature + torsion * torsion;
  if (!(w2 > 0.0)) throw DomainError("helix needs nonzero curvature or torsion");
  const double a = curvature / w2;
  const double b = torsion / w2;
  const double w = std::sqrt(w2);
  std::vector<VectorXd> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = length * static_cast<double>(i) / static_cast<double>(count - 1);
    VectorXd p(3);
    p << a * std::cos(w * s), a * std::sin(w * s), b * w * s;
    pts.push_back(p);
  }
  return DiscreteCurve(SpaceForm(0, 3), std::move(pts));
}

DiscreteCurve frenet_curve(int kappa, const FrenetProfile& prof, double length, std::size_t count,
                           const MatrixXd& frame) {
  const SpaceForm s(kappa, 3);
  if (frame.rows() != s.coord_dim() || frame.cols() != 4) throw DomainError("frenet_curve: frame must be (x, T, N, B)");
  if (count < 3) throw DomainError("frenet_curve: need at least 3 points");
  auto ph = [&](std::size_t i) { return i < prof.phases.size() ? prof.phases[i] : 0.5; };
  const double two_pi = 2.0 * std::numbers::pi;
  const double w1 = two_pi * (0.5 + 2.0 * ph(0)) / length;
  const double w2 = two_pi * (0.5 + 2.0 * ph(1)) / length;
  const double w3 = two_pi * (0.5 + 3.0 * ph(2)) / length;
  auto k_of = [&](double t) {
    const double shape = 0.5 * (1.0 + std::sin(w1 * t + two_pi * ph(3)) * std::sin(w2 * t + two_pi * ph(4)));
    return prof.max_curvature * (1.0 - prof.deficit * shape);
  };
  auto tau_of = [&](double t) { return prof.torsion * std::cos(w3 * t + two_pi * ph(5)); };

  using State = Eigen::Matrix<double, Eigen::Dynamic, 4>;
  auto rhs = [&](double t, const State& y) {
    State d(y.rows(), 4);
    const double k = k_of(t), tau = tau_of(t);
    d.col(0) = y.col(1);
    d.col(1) = -static_cast<double>(kappa) * y.col(0) + k * y.col(2);
    d.col(2) = -k * y.col(1) + tau * y.col(3);
    d.col(3) = -tau * y.col(2);
    return d;
  };

  State y = frame;
  const int sub = 4;
  const double dt = length / static_cast<double>((count - 1) * sub);
  std::vector<VectorXd> pts;
  pts.reserve(count);
  pts.push_back(s.project(y.col(0)));
  double t = 0.0;
  for (std::size_t i = 1; i < count; ++i) {
    for (int j = 0; j < sub; ++j) {
      const State k1 = rhs(t, y);
      const State k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
      const State k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
      const State k4 = rhs(t + dt, y + dt * k3);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    pts.push_back(s.project(y.col(0)));
  }
  return DiscreteCurve(s, std::move(pts));
}

DiscreteCurve random_bow_curve(int kappa, double r, Rng& rng, std::size_t count, double near_equality_fraction) {
  const GeodesicCircle circ = circle_from_radius(kappa, r);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FrenetProfile prof;
  prof.max_curvature = std::abs(circ.curvature);
  if (unit(rng) < near_equality_fraction) {
    prof.deficit = std::pow(10.0, -6.0 + 4.0 * unit(rng));
    prof.torsion = std::pow(10.0, -5.0 + 4.0 * unit(rng));
  } else {
    prof.deficit = 0.05 + 0.95 * unit(rng);
    prof.torsion = 2.0 * unit(rng);
  }
  for (int i = 0; i < 6; ++i) prof.phases.push_back(unit(rng));

  const SpaceForm s(kappa, 3);
  const int d = s.coord_dim();
  const int shift = kappa == 0 ? 0 : 1;
  // Random orthonormal (T, N, B) in the tangent space at the base point.
  const MatrixXd g = Eigen::HouseholderQR<MatrixXd>(Eigen::MatrixXd::NullaryExpr(3, 3, [&](Eigen::Index, Eigen::Index) {
                       return std::normal_distribution<double>(0.0, 1.0)(rng);
                     })).householderQ();
  MatrixXd frame = MatrixXd::Zero(d, 4);
  frame.col(0) = s.base_point();
  frame.block(shift, 1, 3, 3) = g;
  return frenet_curve(kappa, prof, 0.5 * circ.length, count, frame);
}

}  // namespace focalkit
