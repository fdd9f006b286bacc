#pragma once

#include <vector>

#include <Eigen/Dense>

namespace focalkit {

struct Circle2 {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  bool finite = true;
  int iterations = 0;
};

// Algebraic fit with hyperaccuracy (Al-Sharadqah and Chernov). Returns an
// infinite circle for (nearly) collinear data.
Circle2 circle_fit_hyper(const std::vector<Eigen::Vector2d>& pts);

// Damped Gauss-Newton on sum (|p_i - c| - r)^2, starting from `init`.
Circle2 circle_fit_geometric(const std::vector<Eigen::Vector2d>& pts, const Circle2& init, int max_steps = 50);

// Distance circle on the unit sphere S^2 (kappa = +1) or on the hyperboloid
// H^2 (kappa = -1) in R^3 coordinates. center is a model point; radius is
// intrinsic. Infinite when the best plane section is not a circle (H^2 only).
struct ModelCircle {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
  bool finite = true;
  int iterations = 0;
};

ModelCircle model_circle_fit(int kappa, const std::vector<Eigen::Vector3d>& pts, int max_steps = 50);

}  // namespace focalkit
