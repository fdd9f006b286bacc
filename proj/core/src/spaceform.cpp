#include "focalkit/spaceform.hpp"

#include <cmath>
#include <numbers>

#include "focalkit/error.hpp"

namespace focalkit {

SpaceForm::SpaceForm(int kappa, int n) : kappa_(kappa), n_(n) {
  if (kappa != 0 && kappa != 1 && kappa != -1) {
    throw DomainError("curvature must be 0, +1 or -1 (got " + std::to_string(kappa) + ")");
  }
  if (n < 2) throw DomainError("ambient dimension must be at least 2 (got " + std::to_string(n) + ")");
}

double SpaceForm::inner(const VectorXd& x, const VectorXd& y) const {
  if (kappa_ == -1) return x.tail(n_).dot(y.tail(n_)) - x[0] * y[0];
  return x.dot(y);
}

double SpaceForm::norm(const VectorXd& v) const { return std::sqrt(std::max(0.0, inner(v, v))); }

double SpaceForm::constraint_residual(const VectorXd& x) const {
  if (x.size() != coord_dim()) return std::numeric_limits<double>::infinity();
  switch (kappa_) {
    case 0: return 0.0;
    case 1: return std::abs(x.norm() - 1.0);
    default: {
      if (x[0] <= 0.0) return std::numeric_limits<double>::infinity();
      // Relative to the coordinate scale: far from the base point the terms
      // of <x, x> are of size x0^2 and cancel to within their roundoff.
      return std::abs(inner(x, x) + 1.0) / std::max(1.0, x[0] * x[0]);
    }
  }
}

bool SpaceForm::contains(const VectorXd& x, double tol) const { return constraint_residual(x) <= tol; }

VectorXd SpaceForm::project(const VectorXd& x) const {
  switch (kappa_) {
    case 0: return x;
    case 1: return x / x.norm();
    default: {
      VectorXd y = x;
      const double spatial = y.tail(n_).squaredNorm();
      y[0] = std::sqrt(1.0 + spatial);
      return y;
    }
  }
}

VectorXd SpaceForm::tangent_part(const VectorXd& p, const VectorXd& v) const {
  switch (kappa_) {
    case 0: return v;
    case 1: return v - p.dot(v) * p;
    default: return v + inner(p, v) * p;
  }
}

VectorXd SpaceForm::base_point() const {
  VectorXd p = VectorXd::Zero(coord_dim());
  if (kappa_ != 0) p[0] = 1.0;
  return p;
}

double SpaceForm::distance(const VectorXd& x, const VectorXd& y) const {
  // Chord-based forms stay accurate near coincident and antipodal pairs,
  // where arccos/arccosh of the inner product lose half the digits.
  switch (kappa_) {
    case 0: return (x - y).norm();
    case 1: return 2.0 * std::atan2((x - y).norm(), (x + y).norm());
    default: {
      const VectorXd d = x - y;
      return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, inner(d, d))));
    }
  }
}

VectorXd SpaceForm::exp(const VectorXd& p, const VectorXd& v, double t) const {
  if (kappa_ == 0) return p + t * v;
  const double speed = norm(v);
  if (speed == 0.0) return p;
  const double s = t * speed;
  if (kappa_ == 1) return project(std::cos(s) * p + std::sin(s) * (v / speed));
  return project(std::cosh(s) * p + std::sinh(s) * (v / speed));
}

std::string SpaceForm::describe() const {
  switch (kappa_) {
    case 0: return "R^" + std::to_string(n_);
    case 1: return "S^" + std::to_string(n_);
    default: return "H^" + std::to_string(n_);
  }
}

AmbientPoint::AmbientPoint(SpaceForm s, VectorXd c) : space(s), coords(std::move(c)) {
  if (coords.size() != space.coord_dim()) {
    throw DomainError("point has " + std::to_string(coords.size()) + " coordinates; " + space.describe() +
                      " needs " + std::to_string(space.coord_dim()));
  }
  const double r = space.constraint_residual(coords);
  if (r > 1e-10) {
    throw DomainError("point violates the " + space.describe() + " model constraint (residual " +
                      std::to_string(r) + ")");
  }
}

double sf_distance(const AmbientPoint& x, const AmbientPoint& y) {
  if (!(x.space == y.space)) throw DomainError("sf_distance: points live in different space forms");
  return x.space.distance(x.coords, y.coords);
}

AmbientPoint sf_exp(const AmbientPoint& p, const VectorXd& v, double t) {
  if (v.size() != p.space.coord_dim()) throw DomainError("sf_exp: velocity has wrong length");
  if (p.space.kappa() != 0) {
    const double normal = std::abs(p.space.inner(p.coords, v));
    if (normal > 1e-8 * std::max(1.0, v.norm())) {
      throw DomainError("sf_exp: velocity is not tangent at p (normal component " + std::to_string(normal) + ")");
    }
  }
  return AmbientPoint(p.space, p.space.exp(p.coords, v, t));
}

GeodesicCircle circle_from_radius(int kappa, double r) {
  constexpr double pi = std::numbers::pi;
  if (!(r > 0.0)) throw DomainError("circle radius must be positive");
  switch (kappa) {
    case 0: return {0, r, 1.0 / r, 2.0 * pi * r};
    case 1: {
      if (!(r < pi)) throw DomainError("spherical circle radius must be below pi");
      const double c = std::abs(r - pi / 2) < 1e-15 ? 0.0 : std::cos(r) / std::sin(r);
      return {1, r, c, 2.0 * pi * std::sin(r)};
    }
    case -1: return {-1, r, 1.0 / std::tanh(r), 2.0 * pi * std::sinh(r)};
    default: throw DomainError("curvature must be 0, +1 or -1");
  }
}

double FocalDistance::value() const {
  if (is_infinite()) throw DomainError("focal distance is infinite");
  return value_;
}

FocalDistance focal_distance_from_curvature(int kappa, double c) {
  if (!(c >= 0.0)) throw DomainError("curvature must be nonnegative");
  switch (kappa) {
    case 0:
      if (c == 0.0) return FocalDistance::infinite();
      return FocalDistance::finite(1.0 / c);
    case 1:
      // Principal branch of arccot in (0, pi/2] for c >= 0.
      return FocalDistance::finite(std::atan2(1.0, c));
    case -1:
      if (c <= 1.0) return FocalDistance::infinite();
      return FocalDistance::finite(std::atanh(1.0 / c));
    default: throw DomainError("curvature must be 0, +1 or -1");
  }
}

double curvature_from_focal_distance(int kappa, double t) { return circle_from_radius(kappa, t).curvature; }

double circle_chord(int kappa, double r, double arc_length) {
  const GeodesicCircle circ = circle_from_radius(kappa, r);
  const double theta = 2.0 * std::numbers::pi * arc_length / circ.length;
  switch (kappa) {
    case 0: return 2.0 * r * std::abs(std::sin(theta / 2.0));
    case 1: {
      // Half-angle form of cos d = cos^2 r + sin^2 r cos(theta).
      const double s = std::sin(r) * std::abs(std::sin(theta / 2.0));
      return 2.0 * std::asin(std::min(1.0, s));
    }
    default: {
      const double s = std::sinh(r) * std::abs(std::sin(theta / 2.0));
      return 2.0 * std::asinh(s);
    }
  }
}

MatrixXd isometry_to_base(const SpaceForm& space, const VectorXd& p) {
  const int d = space.coord_dim();
  MatrixXd q = MatrixXd::Identity(d, d);
  if (space.kappa() == 1) {
    VectorXd u = p - space.base_point();
    const double uu = u.squaredNorm();
    if (uu > 1e-30) q -= 2.0 * u * u.transpose() / uu;
  } else if (space.kappa() == -1) {
    // Inverse of the boost taking e_0 to p.
    const double p0 = p[0];
    const VectorXd ps = p.tail(d - 1);
    q(0, 0) = p0;
    q.block(0, 1, 1, d - 1) = -ps.transpose();
    q.block(1, 0, d - 1, 1) = -ps;
    q.block(1, 1, d - 1, d - 1) += ps * ps.transpose() / (1.0 + p0);
  }
  return q;
}

}  // namespace focalkit
