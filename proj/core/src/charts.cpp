#include "focalkit/charts.hpp"

#include <cmath>
#include <numbers>

#include "focalkit/error.hpp"

namespace focalkit {

namespace {

// s = w / |w| and its first two directional derivatives.
VectorXd unit_dir(const VectorXd& w) { return w / w.norm(); }

VectorXd unit_dir_d1(const VectorXd& w, const VectorXd& a) {
  const double r = w.norm();
  return a / r - w * (w.dot(a) / (r * r * r));
}

VectorXd unit_dir_d2(const VectorXd& w, const VectorXd& a) {
  const double r = w.norm();
  const double wa = w.dot(a);
  const double r3 = r * r * r;
  return -2.0 * wa / r3 * a - (a.squaredNorm() / r3) * w + (3.0 * wa * wa / (r3 * r * r)) * w;
}

}  // namespace

ImmersedManifold normalized_linear_map(std::string name, SpaceForm ambient, int dim, VectorXd offset,
                                       MatrixXd linear) {
  if (linear.rows() != ambient.coord_dim() || offset.size() != ambient.coord_dim()) {
    throw DomainError("normalized_linear_map: shape does not match the ambient model");
  }
  const int k = static_cast<int>(linear.cols());
  ImmersedManifold m(std::move(name), ambient, dim, ParameterDomain::homogeneous(k),
                     [offset, linear](const VectorXd& w) { return VectorXd(offset + linear * unit_dir(w)); });
  m.with_analytic(
      [linear](const VectorXd& w) {
        MatrixXd j(linear.rows(), linear.cols());
        for (Eigen::Index i = 0; i < linear.cols(); ++i) j.col(i) = linear * unit_dir_d1(w, VectorXd::Unit(w.size(), i));
        return j;
      },
      [linear](const VectorXd& w, const VectorXd& a) { return VectorXd(linear * unit_dir_d2(w, a)); });
  return m;
}

ImmersedManifold umbilical_sphere(int kappa, int n, int m, double rho) {
  const SpaceForm amb(kappa, n);
  if (m < 1 || m >= n) throw DomainError("umbilical_sphere: need 1 <= m < n");
  if (!(rho > 0.0)) throw DomainError("umbilical_sphere: radius must be positive");
  if (kappa == 1 && rho > std::numbers::pi / 2 + 1e-15) {
    throw DomainError("umbilical_sphere: spherical radius must not exceed pi/2");
  }
  const int d = amb.coord_dim();
  VectorXd offset = VectorXd::Zero(d);
  MatrixXd linear = MatrixXd::Zero(d, m + 1);
  const int shift = kappa == 0 ? 0 : 1;
  double radial = rho;
  if (kappa == 1) {
    offset[0] = std::cos(rho);
    radial = std::sin(rho);
  } else if (kappa == -1) {
    offset[0] = std::cosh(rho);
    radial = std::sinh(rho);
  }
  for (int i = 0; i <= m; ++i) linear(shift + i, i) = radial;
  return normalized_linear_map("umbilical-sphere", amb, m, offset, linear);
}

ImmersedManifold ellipsoid(const std::vector<double>& axes, int n) {
  const int k = static_cast<int>(axes.size());
  if (k < 2 || k > n) throw DomainError("ellipsoid: need 2 <= axes <= n");
  MatrixXd linear = MatrixXd::Zero(n, k);
  for (int i = 0; i < k; ++i) linear(i, i) = axes[static_cast<std::size_t>(i)];
  return normalized_linear_map("ellipsoid", SpaceForm(0, n), k - 1, VectorXd::Zero(n), linear);
}

ImmersedManifold clifford_torus_example() {
  const double s3 = std::sqrt(3.0);
  const double c = 2.0 * std::numbers::pi / s3;
  Eigen::Matrix<double, 3, 2> g;
  g << c, 0.0, -c, c, 0.0, -c;

  auto phi = [g, s3](const VectorXd& st) {
    const Eigen::Vector3d x = g * st;
    VectorXd y(6);
    for (int i = 0; i < 3; ++i) {
      y[2 * i] = std::cos(s3 * x[i]) / s3;
      y[2 * i + 1] = std::sin(s3 * x[i]) / s3;
    }
    return y;
  };
  ImmersedManifold m("clifford-torus", SpaceForm(0, 6), 2,
                     ParameterDomain::periodic_box(VectorXd::Zero(2), VectorXd::Ones(2)), phi);
  m.with_analytic(
      [g, s3](const VectorXd& st) {
        const Eigen::Vector3d x = g * st;
        MatrixXd j(6, 2);
        for (int i = 0; i < 3; ++i)
          for (int p = 0; p < 2; ++p) {
            j(2 * i, p) = -std::sin(s3 * x[i]) * g(i, p);
            j(2 * i + 1, p) = std::cos(s3 * x[i]) * g(i, p);
          }
        return j;
      },
      [g, s3](const VectorXd& st, const VectorXd& a) {
        const Eigen::Vector3d x = g * st;
        const Eigen::Vector3d v = g * a;
        VectorXd y(6);
        for (int i = 0; i < 3; ++i) {
          y[2 * i] = -s3 * v[i] * v[i] * std::cos(s3 * x[i]);
          y[2 * i + 1] = -s3 * v[i] * v[i] * std::sin(s3 * x[i]);
        }
        return y;
      });
  return m;
}

ImmersedManifold affine_image(const ImmersedManifold& base, std::string name, SpaceForm target, MatrixXd a,
                              VectorXd b) {
  if (a.rows() != target.coord_dim() || a.cols() != base.ambient().coord_dim() || b.size() != a.rows()) {
    throw DomainError("affine_image: shape mismatch");
  }
  ImmersedManifold out(std::move(name), target, base.dim(), base.domain(),
                       [base, a, b](const VectorXd& w) { return VectorXd(a * base.point(w) + b); });
  out.with_config(base.config());
  if (base.has_analytic()) {
    out.with_analytic([base, a](const VectorXd& w) { return MatrixXd(a * base.jacobian(w, DiffMode::analytic)); },
                      [base, a](const VectorXd& w, const VectorXd& dir) {
                        return VectorXd(a * base.second_derivative(w, dir, DiffMode::analytic));
                      });
  }
  return out;
}

namespace {

// Periodic interpolation kernel on n equispaced nodes of [0,1).
double trig_kernel(int n, double t) {
  double s = 1.0;
  const int half = (n - 1) / 2;
  for (int k = 1; k <= half; ++k) s += 2.0 * std::cos(2.0 * std::numbers::pi * k * t);
  if (n % 2 == 0) s += std::cos(std::numbers::pi * n * t);
  return s / n;
}

}  // namespace

ImmersedManifold tabulated_periodic(std::string name, SpaceForm ambient, std::vector<int> shape, MatrixXd values) {
  const int m = static_cast<int>(shape.size());
  if (m < 1) throw DomainError("tabulated immersion needs at least one axis");
  std::size_t total = 1;
  for (int s : shape) {
    if (s < 3) throw DomainError("tabulated immersion needs at least 3 nodes per axis");
    total *= static_cast<std::size_t>(s);
  }
  if (static_cast<std::size_t>(values.rows()) != total || values.cols() != ambient.coord_dim()) {
    throw DomainError("tabulated immersion: expected " + std::to_string(total) + " rows of " +
                      std::to_string(ambient.coord_dim()) + " coordinates");
  }
  auto chart = [shape, values, ambient, m](const VectorXd& x) {
    std::vector<std::vector<double>> ker(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) {
      const int n = shape[static_cast<std::size_t>(d)];
      auto& kd = ker[static_cast<std::size_t>(d)];
      kd.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) kd[static_cast<std::size_t>(j)] = trig_kernel(n, x[d] - static_cast<double>(j) / n);
    }
    VectorXd y = VectorXd::Zero(values.cols());
    for (Eigen::Index row = 0; row < values.rows(); ++row) {
      double weight = 1.0;
      auto rem = static_cast<std::size_t>(row);
      for (int d = m - 1; d >= 0; --d) {
        const auto n = static_cast<std::size_t>(shape[static_cast<std::size_t>(d)]);
        weight *= ker[static_cast<std::size_t>(d)][rem % n];
        rem /= n;
      }
      y += weight * values.row(row).transpose();
    }
    return ambient.project(y);
  };
  return ImmersedManifold(std::move(name), ambient, m,
                          ParameterDomain::periodic_box(VectorXd::Zero(m), VectorXd::Ones(m)), chart);
}

}  // namespace focalkit
