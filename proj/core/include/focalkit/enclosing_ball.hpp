#pragma once

#include <vector>

#include <Eigen/Dense>

namespace focalkit {

struct EnclosingBall {
  Eigen::VectorXd center;
  double radius = 0.0;
  int iterations = 0;
  double last_move = 0.0;
};

// Approximate smallest enclosing ball by center pulls: the center moves
// toward the farthest point (or away from the nearest support point) with
// the Frank-Wolfe step of the dual problem. Stops once a pull moves the
// center by less than move_tol times the cloud size and the dual gap is
// below gap_tol. The returned radius is the max distance to the center.
EnclosingBall enclosing_ball(const std::vector<Eigen::VectorXd>& points, double move_tol = 1e-7,
                             double gap_tol = 1e-12, int max_iterations = 200000);

}  // namespace focalkit
