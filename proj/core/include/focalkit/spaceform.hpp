#pragma once

// The three model spaces M^n(kappa), kappa in {0, +1, -1}, in coordinates:
//   kappa =  0: R^n
//   kappa = +1: unit sphere in R^{n+1}
//   kappa = -1: upper sheet of <x,x>_L = -1 in Minkowski R^{n+1},
//               signature (-, +, ..., +)

#include <limits>
#include <string>

#include <Eigen/Dense>

namespace focalkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class SpaceForm {
 public:
  SpaceForm(int kappa, int n);

  int kappa() const { return kappa_; }
  int dim() const { return n_; }
  // Length of the model coordinate vectors (n or n+1).
  int coord_dim() const { return kappa_ == 0 ? n_ : n_ + 1; }

  // Euclidean inner product, or the Minkowski form for kappa = -1.
  double inner(const VectorXd& x, const VectorXd& y) const;
  double norm(const VectorXd& v) const;

  // How far x is from satisfying the model constraint (for kappa = -1,
  // relative to x0^2 once the point is far from the base point).
  double constraint_residual(const VectorXd& x) const;
  bool contains(const VectorXd& x, double tol = 1e-10) const;
  // Nearest-point retraction onto the model (normalization).
  VectorXd project(const VectorXd& x) const;
  // Component of v tangent to the model at p.
  VectorXd tangent_part(const VectorXd& p, const VectorXd& v) const;

  // Base point: origin, north pole e_0, or (1, 0, ..., 0) on the hyperboloid.
  VectorXd base_point() const;

  // Intrinsic distance; no validation of the inputs.
  double distance(const VectorXd& x, const VectorXd& y) const;
  // Geodesic from p with initial velocity v, evaluated at time t.
  VectorXd exp(const VectorXd& p, const VectorXd& v, double t) const;

  std::string describe() const;

  friend bool operator==(const SpaceForm&, const SpaceForm&) = default;

 private:
  int kappa_;
  int n_;
};

// A point checked against its model.
struct AmbientPoint {
  AmbientPoint(SpaceForm space, VectorXd coords);

  SpaceForm space;
  VectorXd coords;
};

double sf_distance(const AmbientPoint& x, const AmbientPoint& y);
// Throws DomainError when v is not tangent at p (tolerance 1e-8).
AmbientPoint sf_exp(const AmbientPoint& p, const VectorXd& v, double t);

struct GeodesicCircle {
  int kappa;
  double radius;
  double curvature;
  double length;
};

GeodesicCircle circle_from_radius(int kappa, double r);

// Smallest positive focal distance, or no focal point at all.
class FocalDistance {
 public:
  static FocalDistance finite(double t) { return FocalDistance(t); }
  static FocalDistance infinite() { return FocalDistance(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return !(value_ < std::numeric_limits<double>::infinity()); }
  // Throws DomainError when infinite.
  double value() const;
  // +inf when infinite.
  double value_or_inf() const { return value_; }

 private:
  explicit FocalDistance(double t) : value_(t) {}
  double value_;
};

FocalDistance focal_distance_from_curvature(int kappa, double c);
// Inverse of the above: curvature of a geodesic circle of radius t.
double curvature_from_focal_distance(int kappa, double t);

// Distance in M^2(kappa) between the endpoints of an arc of the given
// length on a geodesic circle of radius r.
double circle_chord(int kappa, double r, double arc_length);

// Euclidean-coordinate linear map preserving the model (rotations, and for
// kappa = -1 a boost). Used to move configurations into canonical position.
MatrixXd isometry_to_base(const SpaceForm& space, const VectorXd& p);

}  // namespace focalkit
