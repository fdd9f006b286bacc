#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>

#include "doctest.h"
#include "focalkit/audit.hpp"
#include "focalkit/charts.hpp"
#include "focalkit/enclosing_ball.hpp"
#include "focalkit/error.hpp"
#include "focalkit/immersion.hpp"
#include "focalkit/veronese.hpp"

using namespace focalkit;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ImmersedManifold plane_patch() {
  VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, 1.0;
  return ImmersedManifold("plane", SpaceForm(0, 3), 2, ParameterDomain::periodic_box(lo, hi), [](const VectorXd& w) {
    VectorXd x(3);
    x << w[0], w[1], 0.0;
    return x;
  });
}

// Unit tangent direction in parameter space for a random frame combination.
VectorXd random_param_direction(const TangentFrame& f, Rng& rng) {
  return f.param_dirs * random_unit_vector(rng, static_cast<int>(f.basis.cols()));
}

}  // namespace

TEST_CASE("second fundamental form examples") {
  Rng rng(1);
  const double rho = 0.8;
  const auto sphere = umbilical_sphere(0, 3, 2, rho);
  const auto torus = clifford_torus_example();
  const auto plane = plane_patch();
  for (int t = 0; t < 50; ++t) {
    const VectorXd ws = sphere.domain().random(rng);
    const ShapeData s = second_fundamental_form(sphere, ws, random_param_direction(tangent_frame(sphere, ws), rng));
    CHECK(s.normal_curvature == doctest::Approx(1.0 / rho).epsilon(1e-6));

    const VectorXd wt = torus.domain().random(rng);
    const TangentFrame ft = tangent_frame(torus, wt);
    const ShapeData st = second_fundamental_form(torus, wt, random_param_direction(ft, rng));
    CHECK(st.normal_curvature == doctest::Approx(std::sqrt(1.5)).epsilon(1e-4));
    // II is normal to M.
    CHECK((ft.basis.transpose() * st.second_fundamental).norm() < 1e-6);
    CHECK(std::abs(st.tangent.norm() - 1.0) < 1e-10);

    const VectorXd wp = plane.domain().random(rng);
    const ShapeData sp = second_fundamental_form(plane, wp, random_param_direction(tangent_frame(plane, wp), rng));
    CHECK(sp.normal_curvature < 1e-8);
  }
}

TEST_CASE("finite differences agree with analytic derivatives") {
  Rng rng(99);
  const ImmersedManifold ms[] = {umbilical_sphere(0, 3, 2, 1.0), umbilical_sphere(1, 4, 2, 0.7),
                                 umbilical_sphere(-1, 3, 2, 1.2), clifford_torus_example()};
  for (const auto& m : ms) {
    REQUIRE(m.has_analytic());
    for (int t = 0; t < 100; ++t) {
      const VectorXd w = m.domain().random(rng);
      const TangentFrame f = tangent_frame(m, w, DiffMode::analytic);
      const VectorXd dir = random_param_direction(f, rng);
      const double a = second_fundamental_form(m, w, dir, DiffMode::analytic).normal_curvature;
      const double b = second_fundamental_form(m, w, dir, DiffMode::finite_difference).normal_curvature;
      CHECK(std::abs(a - b) <= 1e-5 * a);
    }
  }
}

TEST_CASE("shape operator of an umbilical sphere is a multiple of the identity") {
  Rng rng(5);
  const auto m = umbilical_sphere(1, 4, 3, 0.5);
  const VectorXd w = m.domain().random(rng);
  const SecondFundamentalTensor ii(m, tangent_frame(m, w));
  VectorXd xi = ii.component(0, 0);
  xi /= m.ambient().norm(xi);
  const MatrixXd a = ii.shape_operator(xi);
  CHECK((a - a(0, 0) * MatrixXd::Identity(3, 3)).norm() < 1e-8);
  CHECK(std::abs(a(0, 0)) == doctest::Approx(1.0 / std::tan(0.5)).epsilon(1e-8));
}

TEST_CASE("maximum normal curvature and focal radius") {
  SUBCASE("umbilical spheres") {
    for (int kappa : {0, 1, -1}) {
      const double rho = kappa == 1 ? 0.7 : 1.3;
      const auto m = umbilical_sphere(kappa, 4, 2, rho);
      const CurvatureMax c = max_normal_curvature(m);
      const double expected = curvature_from_focal_distance(kappa, rho);
      CHECK(c.value == doctest::Approx(expected).epsilon(1e-5));
      CHECK(c.samples.stddev < 1e-6);
      CHECK(focal_radius(m, c).value() == doctest::Approx(rho).epsilon(1e-5));
    }
  }
  SUBCASE("veronese CP2 is isotropic") {
    const auto m = veronese_manifold(Field::C, 2);
    const CurvatureMax c = max_normal_curvature(m);
    CHECK(c.value == doctest::Approx(kSqrt2).epsilon(1e-3));
    CHECK(c.samples.stddev < 1e-3);
    CHECK(c.samples.mean == doctest::Approx(kSqrt2).epsilon(1e-3));
  }
  SUBCASE("clifford torus") {
    const auto m = clifford_torus_example();
    const CurvatureMax c = max_normal_curvature(m);
    CHECK(c.value == doctest::Approx(std::sqrt(1.5)).epsilon(1e-4));
    CHECK(focal_radius(m, c).value() == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-4));
  }
}

TEST_CASE("extrinsic diameter and circumradius") {
  const auto sphere = umbilical_sphere(0, 4, 2, 0.9);
  CHECK(extrinsic_diameter(sphere).value == doctest::Approx(1.8).epsilon(1e-6));
  const CircumradiusResult cs = circumradius(sphere);
  CHECK(cs.value == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(cs.center.norm() < 1e-5);

  const auto torus = clifford_torus_example();
  const DiameterResult dt = extrinsic_diameter(torus);
  CHECK(std::abs(dt.value - std::sqrt(3.0)) < 1e-3);
  CHECK(dt.value <= std::sqrt(3.0) + 1e-9);
  CHECK(std::abs(circumradius(torus).value - 1.0) < 1e-4);

  const DiameterResult dv = extrinsic_diameter(veronese_manifold(Field::H, 1));
  CHECK(std::abs(dv.value - kSqrt2) < 1e-3);

  CHECK_THROWS_AS(circumradius(umbilical_sphere(1, 3, 2, 0.5)), UnsupportedAmbientError);

  VectorXd a(3), b(3);
  a << 0.6, 0.8, 0.0;
  b = -a;
  const EnclosingBall ball = enclosing_ball({a, b});
  CHECK(ball.radius == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("validation rejects degenerate charts") {
  VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, 1.0;
  const ImmersedManifold folded("folded", SpaceForm(0, 3), 2, ParameterDomain::periodic_box(lo, hi),
                                [](const VectorXd& w) {
                                  VectorXd x(3);
                                  x << std::cos(2 * std::numbers::pi * w[0]), std::sin(2 * std::numbers::pi * w[0]), 0.0;
                                  return x;
                                });
  CHECK_THROWS_AS(validate_immersion(folded), ImmersionError);
  try {
    validate_immersion(folded);
  } catch (const ImmersionError& e) {
    CHECK(std::string(e.what()).find("parameters") != std::string::npos);
  }
  const ImmersedManifold off("off", SpaceForm(1, 3), 2, ParameterDomain::periodic_box(lo, hi), [](const VectorXd& w) {
    VectorXd x(4);
    x << 2.0, w[0], w[1], 0.0;
    return x;
  });
  CHECK_THROWS_AS(validate_immersion(off), ImmersionError);
  CHECK_NOTHROW(validate_immersion(clifford_torus_example()));
}

TEST_CASE("audit examples") {
  SUBCASE("umbilical sphere") {
    const AuditReport r = audit(umbilical_sphere(0, 3, 2, 1.0));
    CHECK(r.ratio == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(r.equality_flag);
    CHECK(r.theorem_ok);
    REQUIRE(r.planar_geodesics);
    CHECK(r.planar_geodesics->succeeded == r.planar_geodesics->requested);
    CHECK(r.planar_geodesics->max_plane_residual < 1e-5);
    CHECK(r.planar_geodesics->max_circle_defect < 1e-5);
    REQUIRE(r.jung);
    CHECK(r.jung->lower_ok);
    CHECK(r.jung->upper_ok);
  }
  SUBCASE("veronese CP2") {
    const AuditReport r = audit(veronese_manifold(Field::C, 2));
    CHECK(std::abs(r.ratio - 2.0) < 5e-3);
    CHECK(r.equality_flag);
  }
  SUBCASE("clifford torus") {
    const AuditReport r = audit(clifford_torus_example());
    CHECK(std::abs(r.ratio - 3.0 / kSqrt2) < 5e-3);
    CHECK_FALSE(r.equality_flag);
    CHECK_FALSE(r.planar_geodesics);
    CHECK(r.jung->lower_ok);
    CHECK(r.jung->upper_ok);
  }
  SUBCASE("spherical and hyperbolic ambients carry no circumradius") {
    const AuditReport r = audit(umbilical_sphere(-1, 3, 2, 1.2));
    CHECK_FALSE(r.circumradius);
    CHECK_FALSE(r.jung);
    CHECK(r.ratio == doctest::Approx(2.0).epsilon(5e-4));
  }
}

TEST_CASE("theorem bound on perturbed scenarios") {
  Rng rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AuditOptions opts;
  opts.probe = ProbeMode::never;
  for (int t = 0; t < 100; ++t) {
    std::optional<ImmersedManifold> m;
    if (t < 40) {
      const int kappa = t % 3 - 1;
      const int n = 3 + t % 3;
      const double rho = kappa == 1 ? 0.2 + 1.3 * unit(rng) : 0.3 + 2.0 * unit(rng);
      m = umbilical_sphere(kappa, n, 2, rho);
    } else {
      const int dim = t < 70 ? 1 : 2;
      std::vector<double> axes;
      for (int i = 0; i <= dim; ++i) axes.push_back(0.7 + 0.7 * unit(rng));
      m = ellipsoid(axes, dim + 1 + t % 2);
    }
    SampleConfig cfg = m->config();
    cfg.curvature_cap = 256;
    cfg.diameter_samples = 256;
    cfg.seed = derive_seed(77, static_cast<std::uint64_t>(t));
    m->with_config(cfg);
    const AuditReport r = audit(*m, opts);
    CHECK(r.ratio >= 2.0 - 5e-3);
    CHECK(r.theorem_ok);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const auto m = clifford_torus_example();
  setenv("FOCALKIT_THREADS", "1", 1);
  const CurvatureMax a = max_normal_curvature(m);
  const DiameterResult da = extrinsic_diameter(m);
  setenv("FOCALKIT_THREADS", "3", 1);
  const CurvatureMax b = max_normal_curvature(m);
  const DiameterResult db = extrinsic_diameter(m);
  unsetenv("FOCALKIT_THREADS");
  CHECK(a.value == b.value);
  CHECK(a.params == b.params);
  CHECK(da.value == db.value);
}
