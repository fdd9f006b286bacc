#pragma once

// Closed immersed submanifolds of a space form, given by a chart
//
//   F : R^k -> model coordinates,
//
// on one of two parameter domains:
//
//   periodic_box  k = m, F periodic in each coordinate (torus type);
//   homogeneous   F(w) depends only on w/|w|, possibly with further fiber
//                 directions in its kernel (spheres, projective spaces).
//
// The tangent space at F(w) is the range of dF(w); it must have rank
// exactly m. All curvature quantities are computed from that range and the
// second directional derivatives of F, so the kernel directions of a
// homogeneous chart never matter.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "focalkit/sampling.hpp"
#include "focalkit/spaceform.hpp"

namespace focalkit {

enum class DomainKind { periodic_box, homogeneous };

struct ParameterDomain {
  DomainKind kind = DomainKind::homogeneous;
  int param_dim = 0;
  VectorXd lower;  // periodic_box only
  VectorXd upper;

  static ParameterDomain homogeneous(int k);
  static ParameterDomain periodic_box(VectorXd lower, VectorXd upper);

  // Wraps into the box, or rescales to the unit sphere.
  VectorXd canonical(const VectorXd& w) const;
  VectorXd random(Rng& rng) const;
  // count parameters: the largest tensor grid that fits (box) padded with
  // seeded random points; seeded random points for homogeneous domains.
  std::vector<VectorXd> samples(std::size_t count, std::uint64_t seed) const;
};

// min(per_axis^m, cap) without overflow.
std::size_t grid_budget(int per_axis, int m, std::size_t cap);

enum class DiffMode { automatic, finite_difference, analytic };

struct SampleConfig {
  int grid_per_axis = 64;
  std::size_t curvature_cap = 4096;
  std::size_t diameter_samples = 1024;
  int refine_candidates = 6;
  int refine_budget = 4000;
  int direction_restarts = 8;
  double fd_step = 1e-4;
  double jacobian_step = 1e-5;
  DiffMode diff_mode = DiffMode::automatic;
  std::uint64_t seed = 17;
};

class ImmersedManifold {
 public:
  using Chart = std::function<VectorXd(const VectorXd&)>;
  using ChartJacobian = std::function<MatrixXd(const VectorXd&)>;
  // Second directional derivative d^2F(w)[a, a].
  using ChartSecond = std::function<VectorXd(const VectorXd& w, const VectorXd& a)>;

  ImmersedManifold(std::string name, SpaceForm ambient, int dim, ParameterDomain domain, Chart chart);

  ImmersedManifold& with_analytic(ChartJacobian jacobian, ChartSecond second);
  ImmersedManifold& with_config(SampleConfig config);

  const std::string& name() const { return name_; }
  const SpaceForm& ambient() const { return ambient_; }
  int dim() const { return dim_; }
  int param_dim() const { return domain_.param_dim; }
  const ParameterDomain& domain() const { return domain_; }
  const SampleConfig& config() const { return config_; }
  SampleConfig& config() { return config_; }
  bool has_analytic() const { return static_cast<bool>(jacobian_); }

  // Chart value retracted onto the model.
  VectorXd point(const VectorXd& w) const;
  // Chart value as supplied (used by validation).
  VectorXd raw_point(const VectorXd& w) const { return chart_(w); }

  MatrixXd jacobian(const VectorXd& w, DiffMode mode = DiffMode::automatic) const;
  VectorXd second_derivative(const VectorXd& w, const VectorXd& a, DiffMode mode = DiffMode::automatic) const;

 private:
  bool use_analytic(DiffMode mode) const;

  std::string name_;
  SpaceForm ambient_;
  int dim_;
  ParameterDomain domain_;
  Chart chart_;
  ChartJacobian jacobian_;
  ChartSecond second_;
  SampleConfig config_;
};

// Orthonormal frame of T_pM in the ambient metric, with parameter-space
// preimages: jacobian * param_dirs == basis.
struct TangentFrame {
  VectorXd params;
  VectorXd point;
  MatrixXd basis;       // coord_dim x m
  MatrixXd param_dirs;  // k x m
  double min_singular = 0.0;
};

// Throws ImmersionError (with the parameter location) when the differential
// has rank below m (smallest singular value <= 1e-7) or above m.
TangentFrame tangent_frame(const ImmersedManifold& m, const VectorXd& params,
                           DiffMode mode = DiffMode::automatic);

// Covariant acceleration in the model, projected onto the normal space of M.
VectorXd normal_component(const ImmersedManifold& m, const TangentFrame& frame, const VectorXd& accel);

struct ShapeData {
  VectorXd point;
  VectorXd tangent;              // unit, ambient coordinates
  VectorXd second_fundamental;   // II(u, u), normal to M
  double normal_curvature = 0.0;
};

// II(u, u) for the tangent u = dF(w) direction, normalized in the induced
// metric. direction is a parameter-space vector.
ShapeData second_fundamental_form(const ImmersedManifold& m, const VectorXd& params, const VectorXd& direction,
                                  DiffMode mode = DiffMode::automatic);

// The full second fundamental form at one point, as normal vectors B_ij in
// the frame basis.
class SecondFundamentalTensor {
 public:
  SecondFundamentalTensor(const ImmersedManifold& m, TangentFrame frame, DiffMode mode = DiffMode::automatic);

  const TangentFrame& frame() const { return frame_; }
  const SpaceForm& ambient() const { return ambient_; }
  int dim() const { return dim_; }
  const VectorXd& component(int i, int j) const { return ii_[static_cast<std::size_t>(i * dim_ + j)]; }

  // II(u, u) for u = basis * y.
  VectorXd value(const VectorXd& y) const;
  // |II(u,u)| / |u|^2.
  double normal_curvature(const VectorXd& y) const;
  // Shape operator A_xi in the frame basis for a unit normal xi.
  MatrixXd shape_operator(const VectorXd& xi) const;

 private:
  SpaceForm ambient_;
  TangentFrame frame_;
  int dim_;
  std::vector<VectorXd> ii_;
};

struct DirectionMax {
  double value = 0.0;     // max normal curvature at the point
  VectorXd coefficients;  // unit, in the frame basis
};

// Maximizes |II(u,u)| over unit u: low-discrepancy starts, then projected
// gradient ascent with backtracking from the best few.
DirectionMax maximize_over_directions(const SecondFundamentalTensor& t, int restarts,
                                      const VectorXd* warm_start = nullptr);

struct CurvatureSummary {
  double min = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct CurvatureMax {
  double value = 0.0;
  VectorXd params;
  VectorXd tangent;  // ambient unit tangent of the maximizing direction
  bool converged = true;
  std::size_t grid_points = 0;
  int refine_evaluations = 0;
  // Normal curvature over the grid points and a fixed direction set.
  CurvatureSummary samples;
  // Pointwise direction-maximum over the grid points.
  CurvatureSummary pointwise_max;
};

CurvatureMax max_normal_curvature(const ImmersedManifold& m);

FocalDistance focal_radius(const ImmersedManifold& m);
FocalDistance focal_radius(const ImmersedManifold& m, const CurvatureMax& cmax);

struct DiameterResult {
  double value = 0.0;
  VectorXd params_a;
  VectorXd params_b;
  std::size_t sampled_points = 0;
  double sampled_value = 0.0;
  int refine_sweeps = 0;
};

// Sampled lower bound refined by coordinate golden-section sweeps.
DiameterResult extrinsic_diameter(const ImmersedManifold& m);

struct CircumradiusResult {
  double value = 0.0;          // max distance from center to M (refined)
  VectorXd center;
  double sample_radius = 0.0;  // enclosing radius of the sample cloud
  int rounds = 0;
};

// kappa = 0 only; throws UnsupportedAmbientError otherwise.
CircumradiusResult circumradius(const ImmersedManifold& m);

// Checks the chart constraint (1e-9) and full rank at sampled parameters.
// Throws ImmersionError naming the first failing location.
void validate_immersion(const ImmersedManifold& m, std::size_t samples = 256);

}  // namespace focalkit
