#include "focalkit/circle_fit.hpp"

#include <algorithm>
#include <cmath>

#include "focalkit/error.hpp"

namespace focalkit {

using Eigen::Vector2d;
using Eigen::Vector3d;

Circle2 circle_fit_hyper(const std::vector<Vector2d>& pts) {
  if (pts.size() < 3) throw DomainError("circle fit needs at least 3 points");
  const double n = static_cast<double>(pts.size());
  Vector2d mean = Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= n;

  double mxx = 0, myy = 0, mxy = 0, mxz = 0, myz = 0, mzz = 0;
  for (const auto& p : pts) {
    const double xi = p.x() - mean.x();
    const double yi = p.y() - mean.y();
    const double zi = xi * xi + yi * yi;
    mxy += xi * yi;
    mxx += xi * xi;
    myy += yi * yi;
    mxz += xi * zi;
    myz += yi * zi;
    mzz += zi * zi;
  }
  mxx /= n;
  myy /= n;
  mxy /= n;
  mxz /= n;
  myz /= n;
  mzz /= n;

  const double mz = mxx + myy;
  const double cov_xy = mxx * myy - mxy * mxy;
  const double var_z = mzz - mz * mz;
  const double a2 = 4.0 * cov_xy - 3.0 * mz * mz - mzz;
  const double a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
  const double a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) - var_z * cov_xy;
  const double a22 = a2 + a2;

  Circle2 out;
  double x = 0.0, y = a0;
  int iter = 0;
  for (; iter < 99; ++iter) {
    const double dy = a1 + x * (a22 + 16.0 * x * x);
    const double xnew = x - y / dy;
    if (xnew == x || !std::isfinite(xnew)) break;
    const double ynew = a0 + xnew * (a1 + xnew * (a2 + 4.0 * xnew * xnew));
    if (std::abs(ynew) >= std::abs(y)) break;
    x = xnew;
    y = ynew;
  }
  out.iterations = iter;

  const double det = x * x - x * mz + cov_xy;
  // Collinear points: the characteristic determinant vanishes relative to
  // the spread of the data.
  if (std::abs(det) <= 1e-14 * mz * mz || !std::isfinite(det)) {
    out.finite = false;
    out.radius = std::numeric_limits<double>::infinity();
    out.center = mean;
    return out;
  }
  const double xc = (mxz * (myy - x) - myz * mxy) / det / 2.0;
  const double yc = (myz * (mxx - x) - mxz * mxy) / det / 2.0;
  out.center = Vector2d(xc, yc) + mean;
  out.radius = std::sqrt(std::max(0.0, xc * xc + yc * yc + mz - x - x));
  if (!std::isfinite(out.radius) || out.radius > 1e8 * std::sqrt(mz)) {
    out.finite = false;
    out.radius = std::numeric_limits<double>::infinity();
  }
  return out;
}

namespace {

// Levenberg-damped Gauss-Newton on a small parameter vector. `eval` fills
// residuals and their Jacobian; `apply` returns the updated parameters.
template <class Params, class Eval, class Apply>
int damped_gauss_newton(Params& params, int residuals, int unknowns, int max_steps, Eval eval, Apply apply) {
  Eigen::VectorXd f(residuals), f_try(residuals);
  Eigen::MatrixXd jac(residuals, unknowns), jac_try(residuals, unknowns);
  eval(params, f, jac);
  double cost = f.squaredNorm();
  double mu = 1e-3;
  int step = 0;
  for (; step < max_steps; ++step) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * f;
    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += mu * (jtj.diagonal().array() + 1e-300).matrix();
      const Eigen::VectorXd delta = -lhs.ldlt().solve(g);
      if (!delta.allFinite()) break;
      Params candidate = apply(params, delta);
      eval(candidate, f_try, jac_try);
      const double c = f_try.squaredNorm();
      if (c <= cost) {
        const double gain = cost - c;
        params = candidate;
        f = f_try;
        jac = jac_try;
        cost = c;
        mu = std::max(mu * 0.3, 1e-12);
        accepted = true;
        if (gain <= 1e-30 + 1e-15 * cost || delta.norm() < 1e-15) return step + 1;
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) break;
  }
  return step;
}

}  // namespace

Circle2 circle_fit_geometric(const std::vector<Vector2d>& pts, const Circle2& init, int max_steps) {
  if (!init.finite) return init;
  const int n = static_cast<int>(pts.size());
  Eigen::Vector3d params(init.center.x(), init.center.y(), init.radius);
  const int steps = damped_gauss_newton(
      params, n, 3, max_steps,
      [&](const Eigen::Vector3d& p, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
        for (int i = 0; i < n; ++i) {
          const Vector2d d = pts[static_cast<std::size_t>(i)] - p.head<2>();
          const double len = std::max(d.norm(), 1e-300);
          f[i] = len - p[2];
          jac(i, 0) = -d.x() / len;
          jac(i, 1) = -d.y() / len;
          jac(i, 2) = -1.0;
        }
      },
      [](const Eigen::Vector3d& p, const Eigen::VectorXd& delta) { return Eigen::Vector3d(p + delta); });
  Circle2 out;
  out.center = params.head<2>();
  out.radius = std::abs(params[2]);
  out.iterations = init.iterations + steps;
  return out;
}

namespace {

double model_inner(int kappa, const Vector3d& a, const Vector3d& b) {
  return kappa == -1 ? a.tail<2>().dot(b.tail<2>()) - a[0] * b[0] : a.dot(b);
}

double model_distance(int kappa, const Vector3d& a, const Vector3d& b) {
  if (kappa == 1) return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
  const Vector3d d = a - b;
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, model_inner(-1, d, d))));
}

// Orthonormal tangent basis at c (Euclidean on S^2, Minkowski on H^2).
Eigen::Matrix<double, 3, 2> tangent_basis(int kappa, const Vector3d& c) {
  Eigen::Matrix<double, 3, 2> t;
  int filled = 0;
  for (int axis = 0; axis < 3 && filled < 2; ++axis) {
    Vector3d v = Vector3d::Unit(axis);
    if (kappa == 1) {
      v -= c.dot(v) * c;
    } else {
      v += model_inner(-1, c, v) * c;
    }
    for (int j = 0; j < filled; ++j) v -= model_inner(kappa, t.col(j), v) * t.col(j);
    const double len2 = model_inner(kappa, v, v);
    if (len2 < 1e-8) continue;
    t.col(filled++) = v / std::sqrt(len2);
  }
  return t;
}

Vector3d model_exp(int kappa, const Vector3d& c, const Vector3d& v) {
  const double s = std::sqrt(std::max(0.0, model_inner(kappa, v, v)));
  if (s == 0.0) return c;
  Vector3d y = kappa == 1 ? Vector3d(std::cos(s) * c + std::sin(s) * v / s)
                          : Vector3d(std::cosh(s) * c + std::sinh(s) * v / s);
  if (kappa == 1) return y.normalized();
  y[0] = std::sqrt(1.0 + y.tail<2>().squaredNorm());
  return y;
}

}  // namespace

ModelCircle model_circle_fit(int kappa, const std::vector<Vector3d>& pts, int max_steps) {
  if (kappa != 1 && kappa != -1) throw DomainError("model_circle_fit: kappa must be +1 or -1");
  if (pts.size() < 3) throw DomainError("circle fit needs at least 3 points");

  // Algebraic stage: a circle is a plane section <n, x> = delta of the model.
  Vector3d mean = Vector3d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Vector3d normal = eig.eigenvectors().col(0);
  const double delta = normal.dot(mean);

  ModelCircle out;
  if (kappa == 1) {
    const double sign = delta < 0.0 ? -1.0 : 1.0;
    out.center = sign * normal;
    out.radius = std::acos(std::clamp(sign * delta, -1.0, 1.0));
  } else {
    // <n_L, x>_L = n . x with n_L = (-n0, n1, n2).
    Vector3d nl(-normal[0], normal[1], normal[2]);
    const double q = model_inner(-1, nl, nl);
    if (!(q < -1e-12)) {
      out.finite = false;
      out.radius = std::numeric_limits<double>::infinity();
      out.center = Vector3d(1.0, 0.0, 0.0);
      return out;
    }
    const double s = std::sqrt(-q);
    Vector3d c = nl / s;
    double dc = delta / s;
    if (c[0] < 0.0) {
      c = -c;
      dc = -dc;
    }
    out.center = c;
    out.radius = std::acosh(std::max(1.0, -dc));
  }

  // Geometric stage on (center, radius).
  const int n = static_cast<int>(pts.size());
  struct State {
    Vector3d c;
    double r;
  };
  State st{out.center, out.radius};
  auto eval = [&](const State& s, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
    const auto t = tangent_basis(kappa, s.c);
    for (int i = 0; i < n; ++i) {
      const Vector3d& x = pts[static_cast<std::size_t>(i)];
      const double d = model_distance(kappa, s.c, x);
      const double sd = std::max(kappa == 1 ? std::sin(d) : std::sinh(d), 1e-300);
      f[i] = d - s.r;
      jac(i, 0) = -model_inner(kappa, t.col(0), x) / sd;
      jac(i, 1) = -model_inner(kappa, t.col(1), x) / sd;
      jac(i, 2) = -1.0;
    }
  };
  auto apply = [&](const State& s, const Eigen::VectorXd& delta) {
    const auto t = tangent_basis(kappa, s.c);
    return State{model_exp(kappa, s.c, t * delta.head<2>()), s.r + delta[2]};
  };
  out.iterations = damped_gauss_newton(st, n, 3, max_steps, eval, apply);
  out.center = st.c;
  out.radius = st.r;
  return out;
}

}  // namespace focalkit
