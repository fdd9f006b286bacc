#include "focalkit/enclosing_ball.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "focalkit/error.hpp"

namespace focalkit {

namespace {

constexpr double kPolishGap = 1e-6;
constexpr int kFirstPhase = 4000;

// Circumcenter of the support points within their affine hull, as
// barycentric weights: 2 G u + rho 1 = diag(G), sum u = 1 (G the Gram
// matrix of the support, translated to its first point).
Eigen::VectorXd support_weights(const std::vector<Eigen::VectorXd>& points, const std::vector<std::size_t>& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  const Eigen::VectorXd& q = points[s[0]];
  Eigen::MatrixXd p(q.size(), k);
  for (Eigen::Index j = 0; j < k; ++j) p.col(j) = points[s[static_cast<std::size_t>(j)]] - q;
  const Eigen::MatrixXd g = p.transpose() * p;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
  a.topLeftCorner(k, k) = 2.0 * g;
  a.topRightCorner(k, 1).setOnes();
  a.bottomLeftCorner(1, k).setOnes();
  Eigen::VectorXd rhs(k + 1);
  rhs.head(k) = g.diagonal();
  rhs[k] = 1.0;
  return a.completeOrthogonalDecomposition().solve(rhs).head(k);
}

// Exact ball from a starting support: drop points with negative weight,
// add the farthest violator, repeat. Empty result when it does not settle.
std::optional<Eigen::VectorXd> polish_center(const std::vector<Eigen::VectorXd>& points,
                                             std::vector<std::size_t> support) {
  const std::size_t n = points.size();
  const int max_rounds = static_cast<int>(4 * n + 100);
  for (int round = 0; round < max_rounds; ++round) {
    Eigen::VectorXd u = support_weights(points, support);
    while (support.size() > 1) {
      Eigen::Index worst = 0;
      if (u.minCoeff(&worst) >= -1e-14) break;
      support.erase(support.begin() + worst);
      u = support_weights(points, support);
    }
    Eigen::VectorXd c = points[support[0]];
    for (std::size_t j = 0; j < support.size(); ++j) c += u[static_cast<Eigen::Index>(j)] * (points[support[j]] - points[support[0]]);
    double r2 = 0.0;
    for (std::size_t i : support) r2 = std::max(r2, (points[i] - c).squaredNorm());
    std::size_t far = 0;
    double far2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = (points[i] - c).squaredNorm();
      if (d2 > far2) {
        far2 = d2;
        far = i;
      }
    }
    if (far2 <= r2 * (1.0 + 1e-13) + 1e-300) return c;
    if (std::find(support.begin(), support.end(), far) != support.end()) return std::nullopt;
    support.push_back(far);
  }
  return std::nullopt;
}

// Records the pulled center in ball, then tries the exact finish from it.
bool finish(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& c, const std::vector<double>& u,
            double move, int it, EnclosingBall& ball) {
  const std::size_t n = points.size();
  ball.center = c;
  ball.iterations = it;
  ball.last_move = move;
  ball.radius = 0.0;
  for (const auto& p : points) ball.radius = std::max(ball.radius, (p - c).norm());

  std::vector<std::size_t> support;
  const double r2max = ball.radius * ball.radius;
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] > 0.0 || (points[i] - c).squaredNorm() >= r2max * (1.0 - 1e-6)) support.push_back(i);
  }
  if (support.size() > static_cast<std::size_t>(c.size()) + 1) {
    std::sort(support.begin(), support.end(), [&](std::size_t x, std::size_t y) {
      return (points[x] - c).squaredNorm() > (points[y] - c).squaredNorm();
    });
    support.resize(static_cast<std::size_t>(c.size()) + 1);
  }
  const auto exact = polish_center(points, support);
  if (!exact) return false;
  double radius = 0.0;
  for (const auto& p : points) radius = std::max(radius, (p - *exact).norm());
  if (radius > ball.radius) return false;
  ball.last_move = (*exact - c).norm();
  ball.center = *exact;
  ball.radius = radius;
  return true;
}

}  // namespace

EnclosingBall enclosing_ball(const std::vector<Eigen::VectorXd>& points, double move_tol, double gap_tol,
                             int max_iterations) {
  if (points.empty()) throw DomainError("enclosing_ball: empty point set");
  const std::size_t n = points.size();

  EnclosingBall ball;
  if (n == 1) {
    ball.center = points[0];
    return ball;
  }

  auto farthest_from = [&](const Eigen::VectorXd& c) {
    std::size_t best = 0;
    double bd = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dd = (points[i] - c).squaredNorm();
      if (dd > bd) {
        bd = dd;
        best = i;
      }
    }
    return best;
  };

  // Dual weights u (simplex), center c = sum u_i p_i.
  std::vector<double> u(n, 0.0);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = points[i].squaredNorm();
  const std::size_t a = farthest_from(points[0]);
  const std::size_t b = farthest_from(points[a]);
  u[a] += 0.5;
  u[b] += 0.5;
  Eigen::VectorXd c = 0.5 * (points[a] + points[b]);
  const double scale = std::max((points[a] - points[b]).norm(), 1e-300);

  std::vector<double> r2(n);
  int it = 0;
  double move = 0.0;
  auto pull = [&](int limit) {
  for (; it < limit; ++it) {
    double gamma = -c.squaredNorm();
    for (std::size_t i = 0; i < n; ++i) gamma += u[i] * sq[i];
    gamma = std::max(gamma, 1e-300);

    std::size_t far = 0, near = n;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = (points[i] - c).squaredNorm();
      if (r2[i] > r2[far]) far = i;
      if (u[i] > 0.0 && (near == n || r2[i] < r2[near])) near = i;
    }
    const double up = r2[far] / gamma - 1.0;
    const double down = near == n ? 0.0 : 1.0 - r2[near] / gamma;
    if (std::max(up, down) <= std::max(gap_tol, kPolishGap)) break;

    Eigen::VectorXd next;
    if (up >= down) {
      const double lambda = up / (2.0 * (1.0 + up));
      for (double& x : u) x *= (1.0 - lambda);
      u[far] += lambda;
      next = (1.0 - lambda) * c + lambda * points[far];
    } else {
      // Away step: drop weight from the support point nearest the center.
      double lambda = down / (2.0 * (1.0 - down));
      lambda = std::min(lambda, u[near] / (1.0 - u[near]));
      for (double& x : u) x *= (1.0 + lambda);
      u[near] -= lambda;
      if (u[near] < 1e-300) u[near] = 0.0;
      next = (1.0 + lambda) * c - lambda * points[near];
    }
    move = (next - c).norm();
    c = std::move(next);
    if (move <= move_tol * scale && up <= 1e-9) break;
  }
  };

  // Finish exactly from the points carrying weight and those near the
  // sphere; keep whichever center verifies smaller. Clusters of nearly
  // coincident points make the pulls crawl, so try the exact finish early
  // and only keep pulling when it fails.
  const int first_limit = std::min(max_iterations, kFirstPhase);
  pull(first_limit);
  if (finish(points, c, u, move, it, ball)) return ball;
  pull(max_iterations);
  finish(points, c, u, move, it, ball);
  return ball;
}
}  // namespace focalkit
