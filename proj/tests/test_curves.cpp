#include <cmath>
#include <numbers>

#include "doctest.h"
#include "focalkit/charts.hpp"
#include "focalkit/circle_fit.hpp"
#include "focalkit/curves.hpp"
#include "focalkit/error.hpp"
#include "focalkit/veronese.hpp"

using namespace focalkit;
using std::numbers::pi;

namespace {

// Random isometry of the model, as a linear map on coordinates (plus a
// translation for kappa = 0).
struct Isometry {
  MatrixXd a;
  VectorXd b;
  VectorXd operator()(const VectorXd& x) const { return a * x + b; }
};

Isometry random_isometry(const SpaceForm& s, Rng& rng) {
  const int d = s.coord_dim();
  Isometry iso{MatrixXd::Identity(d, d), VectorXd::Zero(d)};
  if (s.kappa() == 0) {
    iso.a = Eigen::HouseholderQR<MatrixXd>(MatrixXd::NullaryExpr(d, d, [&] { return std::normal_distribution<>()(rng); }))
                .householderQ();
    iso.b = gaussian_vector(rng, d);
  } else if (s.kappa() == 1) {
    iso.a = Eigen::HouseholderQR<MatrixXd>(MatrixXd::NullaryExpr(d, d, [&] { return std::normal_distribution<>()(rng); }))
                .householderQ();
  } else {
    // Rotation of the spatial block, then a boost in the (0, 1) plane.
    MatrixXd rot = MatrixXd::Identity(d, d);
    rot.bottomRightCorner(d - 1, d - 1) =
        Eigen::HouseholderQR<MatrixXd>(MatrixXd::NullaryExpr(d - 1, d - 1, [&] { return std::normal_distribution<>()(rng); }))
            .householderQ();
    MatrixXd boost = MatrixXd::Identity(d, d);
    const double t = 0.7;
    boost(0, 0) = boost(1, 1) = std::cosh(t);
    boost(0, 1) = boost(1, 0) = std::sinh(t);
    iso.a = boost * rot;
  }
  return iso;
}

DiscreteCurve transform(const DiscreteCurve& c, const Isometry& iso) {
  std::vector<VectorXd> pts;
  for (const auto& p : c.points()) pts.push_back(iso(p));
  return DiscreteCurve(c.space(), std::move(pts));
}

DiscreteCurve segment(int n, std::size_t count) {
  std::vector<VectorXd> pts;
  for (std::size_t i = 0; i < count; ++i) {
    VectorXd x = VectorXd::Zero(n);
    x[0] = static_cast<double>(i) * 0.01;
    x[1] = 0.5 * x[0];
    pts.push_back(x);
  }
  return DiscreteCurve(SpaceForm(0, n), pts);
}

}  // namespace

TEST_CASE("curve construction") {
  CHECK_THROWS_AS(DiscreteCurve(SpaceForm(0, 2), {VectorXd::Zero(2), VectorXd::Ones(2)}), DomainError);
  std::vector<VectorXd> off(3, VectorXd::Zero(3));
  off[0] << 1, 0, 0;
  off[1] << 0, 1, 0;
  off[2] << 0, 0, 1.01;
  CHECK_THROWS_AS(DiscreteCurve(SpaceForm(1, 2), off), DomainError);

  const DiscreteCurve c = half_circle_curve(0, 2, 1.0, 101);
  CHECK(c.is_unit_speed());
  CHECK(c.length() == doctest::Approx(pi).epsilon(1e-4));
  const DiscreteCurve r = resample_unit_speed(c, 101);
  double moved = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) moved = std::max(moved, (c.points()[i] - r.points()[i]).norm());
  CHECK(moved < 1e-8);
}

TEST_CASE("discrete curvature") {
  const CurvatureEstimate flat = discrete_curvature(segment(3, 50));
  CHECK(flat.max_all() < 1e-6);

  const double r = 0.8;
  const auto count = static_cast<std::size_t>(std::lround(pi * 1000)) + 1;  // h = r / 1000
  const CurvatureEstimate k0 = discrete_curvature(half_circle_curve(0, 2, r, count));
  CHECK(std::abs(k0.max_all() - 1.0 / r) < 1e-4);
  for (double v : k0.values) CHECK(std::abs(v - 1.0 / r) < 1e-4);

  for (int kappa : {1, -1}) {
    const double rr = 0.9;
    const CurvatureEstimate k = discrete_curvature(circle_arc_curve(kappa, 2, rr, 2.0, 801));
    const double expected = circle_from_radius(kappa, rr).curvature;
    for (double v : k.values) CHECK(std::abs(v - expected) < 1e-3);
  }
  CHECK_THROWS_AS(discrete_curvature(segment(2, 4)), DomainError);
}

TEST_CASE("bow examples") {
  SUBCASE("half circles are the equality case") {
    for (int kappa : {0, 1, -1}) {
      for (double r : {0.5, 1.0}) {
        const BowReport rep = bow_chord_check(half_circle_curve(kappa, 3, r, 2001), r);
        CHECK(std::abs(rep.margin) < 1e-5);
        CHECK(rep.near_equality);
        REQUIRE(rep.planarity);
        CHECK(rep.planarity->max_residual() < 1e-6);
      }
    }
  }
  SUBCASE("half great circle") {
    const BowReport rep = bow_chord_check(half_circle_curve(1, 2, pi / 2, 2001), pi / 2);
    CHECK(rep.chord == doctest::Approx(pi).epsilon(1e-9));
    CHECK(rep.circle_curvature == 0.0);
  }
  SUBCASE("helix") {
    const double k = 0.9, tau = 0.3, length = pi;
    const BowReport rep = bow_chord_check(helix_curve(k, tau, length, 2001), 1.0);
    const double a = k / (k * k + tau * tau), b = tau / (k * k + tau * tau);
    const double theta = length / std::hypot(a, b);
    const double chord = std::hypot(2.0 * a * std::sin(theta / 2.0), b * theta);
    CHECK(rep.chord == doctest::Approx(chord).epsilon(1e-9));
    CHECK(rep.margin > 0.05);
    CHECK_FALSE(rep.near_equality);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(bow_chord_check(half_circle_curve(0, 2, 1.0, 401), 1.2), DomainError);  // length
    CHECK_THROWS_AS(bow_chord_check(circle_arc_curve(0, 2, 0.5, pi, 401), 1.0), DomainError);  // curvature
    std::vector<VectorXd> pts;
    for (int i = 0; i < 401; ++i) {
      const double t = pi * std::pow(i / 400.0, 2.0);
      VectorXd x(2);
      x << std::cos(t), std::sin(t);
      pts.push_back(x);
    }
    CHECK_THROWS_AS(bow_chord_check(DiscreteCurve(SpaceForm(0, 2), pts), 1.0), DomainError);  // speed
  }
}

TEST_CASE("random curves respect the chord bound") {
  Rng rng(404);
  for (int t = 0; t < 60; ++t) {
    const int kappa = t % 3 == 0 ? 0 : (t % 3 == 1 ? 1 : -1);
    const double r = 0.5 + 0.25 * (t % 4);
    const DiscreteCurve c = random_bow_curve(kappa, r, rng);
    const BowReport rep = bow_chord_check(c, r);
    CHECK(rep.margin >= -1e-4);
    if (rep.margin < 1e-3 * r) {
      REQUIRE(rep.planarity);
      CHECK(rep.planarity->max_residual() < 1e-2);
    }
  }
}

TEST_CASE("planar circle defect") {
  Rng rng(8);
  for (int kappa : {0, 1, -1}) {
    const DiscreteCurve c = circle_arc_curve(kappa, 4, 0.7, 2.5, 300);
    const PlanarityReport rep = planar_circle_defect(c);
    CHECK(rep.plane_residual < 1e-8);
    CHECK(rep.circle_defect < 1e-8);
    CHECK(rep.radius == doctest::Approx(0.7).epsilon(1e-8));

    const DiscreteCurve moved = transform(c, random_isometry(c.space(), rng));
    const PlanarityReport rep2 = planar_circle_defect(moved);
    CHECK(std::abs(rep2.plane_residual - rep.plane_residual) < 1e-9);
    CHECK(std::abs(rep2.circle_defect - rep.circle_defect) < 1e-9);
    CHECK(std::abs(rep2.radius - rep.radius) < 1e-9);

    const DiscreteCurve helixish = random_bow_curve(kappa, 0.7, rng, 401, 0.0);
    const PlanarityReport h1 = planar_circle_defect(helixish);
    const PlanarityReport h2 = planar_circle_defect(transform(helixish, random_isometry(helixish.space(), rng)));
    CHECK(std::abs(h1.plane_residual - h2.plane_residual) < 1e-9);
    CHECK(std::abs(h1.circle_defect - h2.circle_defect) < 1e-9);
  }
  const PlanarityReport line = planar_circle_defect(segment(3, 20));
  CHECK_FALSE(line.finite_radius);
  CHECK(std::isinf(line.radius));
  CHECK(line.plane_residual == 0.0);
  CHECK_THROWS_AS(planar_circle_defect(segment(3, 9)), DomainError);
}

TEST_CASE("circle fits") {
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 40; ++i) {
    const double t = 0.05 * i;
    pts.emplace_back(1.0 + 2.0 * std::cos(t), -3.0 + 2.0 * std::sin(t));
  }
  const Circle2 hyper = circle_fit_hyper(pts);
  REQUIRE(hyper.finite);
  CHECK(hyper.radius == doctest::Approx(2.0).epsilon(1e-10));
  CHECK((hyper.center - Eigen::Vector2d(1.0, -3.0)).norm() < 1e-9);
  Circle2 rough = hyper;
  rough.radius *= 1.1;
  rough.center += Eigen::Vector2d(0.1, -0.05);
  const Circle2 geo = circle_fit_geometric(pts, rough);
  CHECK(geo.radius == doctest::Approx(2.0).epsilon(1e-10));

  std::vector<Eigen::Vector2d> line;
  for (int i = 0; i < 10; ++i) line.emplace_back(i, 2.0 * i);
  CHECK_FALSE(circle_fit_hyper(line).finite);

  for (int kappa : {1, -1}) {
    const DiscreteCurve c = circle_arc_curve(kappa, 2, 0.6, 1.5, 80);
    std::vector<Eigen::Vector3d> p3;
    for (const auto& p : c.points()) p3.emplace_back(p[0], p[1], p[2]);
    const ModelCircle mc = model_circle_fit(kappa, p3);
    REQUIRE(mc.finite);
    CHECK(mc.radius == doctest::Approx(0.6).epsilon(1e-9));
  }
}

TEST_CASE("geodesic integration") {
  SUBCASE("great circle closes") {
    const auto sphere = umbilical_sphere(0, 3, 2, 1.0);
    Rng rng(3);
    const VectorXd w = sphere.domain().random(rng);
    const TangentFrame f = tangent_frame(sphere, w);
    const VectorXd u = f.basis * random_unit_vector(rng, 2);
    const GeodesicResult g = integrate_geodesic(sphere, w, u, 2 * pi, 2 * pi / 400);
    CHECK((g.curve.back() - g.curve.front()).norm() < 1e-5);
    CHECK(g.curve.is_unit_speed());
    const PlanarityReport rep = planar_circle_defect(g.curve);
    CHECK(rep.radius == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("geodesics of a round sphere are circles of its radius") {
    const double rho = 0.6;
    const auto sphere = umbilical_sphere(0, 4, 3, rho);
    Rng rng(4);
    const VectorXd w = sphere.domain().random(rng);
    const VectorXd u = tangent_frame(sphere, w).basis * random_unit_vector(rng, 3);
    const GeodesicResult g = integrate_geodesic(sphere, w, u, 2.0, 0.005);
    const PlanarityReport rep = planar_circle_defect(g.curve);
    CHECK(rep.radius == doctest::Approx(rho).epsilon(1e-6));
    CHECK(rep.plane_residual < 1e-8);
  }
  SUBCASE("veronese RP2 geodesic closes") {
    const auto m = veronese_manifold(Field::R, 2);
    Rng rng(5);
    const VectorXd w = m.domain().random(rng);
    const VectorXd u = tangent_frame(m, w).basis * random_unit_vector(rng, 2);
    const double length = 2 * pi / std::sqrt(2.0);
    const GeodesicResult g = integrate_geodesic(m, w, u, length, length / 800);
    CHECK((g.curve.back() - g.curve.front()).norm() < 1e-4);
  }
  SUBCASE("geodesics bend only normally") {
    const auto torus = clifford_torus_example();
    Rng rng(6);
    const VectorXd w = torus.domain().random(rng);
    const VectorXd u = tangent_frame(torus, w).basis * random_unit_vector(rng, 2);
    const GeodesicResult g = integrate_geodesic(torus, w, u, 3.0, 0.003);
    CHECK(g.max_speed_drift < 1e-5);
    const CurvatureEstimate k = discrete_curvature(g.curve);
    for (std::size_t i = 1; i + 1 < k.values.size(); ++i) CHECK(std::abs(k.values[i] - std::sqrt(1.5)) < 1e-3);
    CHECK(planar_circle_defect(g.curve).plane_residual > 0.01);
  }
  SUBCASE("step and direction checks") {
    const auto sphere = umbilical_sphere(0, 3, 2, 1.0);
    VectorXd w(3), u(3);
    w << 1, 0, 0;
    u << 0, 1, 0;
    CHECK_THROWS_AS(integrate_geodesic(sphere, w, u, 1.0, 0.02), DomainError);
    CHECK_THROWS_AS(integrate_geodesic(sphere, w, VectorXd::Unit(3, 0), 1.0, 0.01), DomainError);
  }
}

TEST_CASE("planar geodesic reports") {
  const PlanarGeodesicStats us = planar_geodesics_report(umbilical_sphere(0, 3, 2, 1.0), 20, 2 * pi);
  CHECK(us.succeeded == 20);
  CHECK(us.max_plane_residual < 1e-5);
  CHECK(us.max_circle_defect < 1e-5);

  const PlanarGeodesicStats hp = planar_geodesics_report(veronese_manifold(Field::H, 1), 20, 2 * pi / std::sqrt(2.0));
  CHECK(hp.succeeded == 20);
  CHECK(hp.max_plane_residual < 1e-4);
  CHECK(hp.max_circle_defect < 1e-4);
  CHECK(hp.radius_dispersion < 1e-3);

  const PlanarGeodesicStats el = planar_geodesics_report(ellipsoid({1.0, 1.0, 1.3}, 3), 20, 2 * pi / 1.3);
  CHECK(std::max(el.max_plane_residual, el.max_circle_defect) > 1e-3);
}
