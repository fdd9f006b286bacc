#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "focalkit/algebra.hpp"
#include "focalkit/charts.hpp"
#include "focalkit/circle_fit.hpp"
#include "focalkit/curves.hpp"
#include "focalkit/enclosing_ball.hpp"
#include "focalkit/immersion.hpp"
#include "focalkit/sampling.hpp"
#include "focalkit/spaceform.hpp"
#include "focalkit/veronese.hpp"

using namespace focalkit;

namespace {

AlgebraElement random_element(Field f, Rng& rng) {
  const VectorXd g = gaussian_vector(rng, field_dim(f));
  AlgebraElement e = AlgebraElement::real(f, 0.0);
  for (int i = 0; i < field_dim(f); ++i) e[i] = g[i];
  return e;
}

VectorXd random_model_point(const SpaceForm& s, Rng& rng, double spread) {
  const VectorXd base = s.base_point();
  return s.exp(base, s.tangent_part(base, spread * gaussian_vector(rng, s.coord_dim())), 1.0);
}

Field field_arg(int i) {
  switch (i) {
    case 0: return Field::R;
    case 1: return Field::C;
    case 2: return Field::H;
    default: return Field::O;
  }
}

void BM_OctonionProduct(benchmark::State& state) {
  Rng rng(1);
  const auto a = random_element(Field::O, rng), b = random_element(Field::O, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_OctonionProduct);

void BM_HyperbolicDistance(benchmark::State& state) {
  const SpaceForm h(-1, 5);
  Rng rng(2);
  const VectorXd x = random_model_point(h, rng, 2.0), y = random_model_point(h, rng, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(h.distance(x, y));
}
BENCHMARK(BM_HyperbolicDistance);

void BM_ProjectorAndCertify(benchmark::State& state) {
  const Field f = field_arg(static_cast<int>(state.range(0)));
  const int l = f == Field::O ? 2 : 3;
  Rng rng(3);
  const Line v = random_line(f, l, rng);
  for (auto _ : state) {
    const ProjectivePoint p = projector_from_line(v);
    benchmark::DoNotOptimize(certify_point(p.matrix()));
  }
}
BENCHMARK(BM_ProjectorAndCertify)->DenseRange(0, 3);

// One full second fundamental tensor at a point.
void BM_SecondFundamentalTensor(benchmark::State& state) {
  const ImmersedManifold m = state.range(0) == 0 ? clifford_torus_example() : veronese_manifold(Field::H, 1);
  Rng rng(4);
  const VectorXd w = m.domain().random(rng);
  for (auto _ : state) {
    const SecondFundamentalTensor t(m, tangent_frame(m, w));
    benchmark::DoNotOptimize(t.component(0, 0));
  }
}
BENCHMARK(BM_SecondFundamentalTensor)->Arg(0)->Arg(1);

void BM_MaxNormalCurvature(benchmark::State& state) {
  const ImmersedManifold m = ellipsoid({1.0, 1.2, 1.1}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(max_normal_curvature(m).value);
}
BENCHMARK(BM_MaxNormalCurvature)->Unit(benchmark::kMillisecond);

void BM_ExtrinsicDiameter(benchmark::State& state) {
  const ImmersedManifold m = clifford_torus_example();
  for (auto _ : state) benchmark::DoNotOptimize(extrinsic_diameter(m).value);
}
BENCHMARK(BM_ExtrinsicDiameter)->Unit(benchmark::kMillisecond);

void BM_EnclosingBall(benchmark::State& state) {
  Rng rng(5);
  std::vector<VectorXd> pts;
  for (int i = 0; i < state.range(0); ++i) pts.push_back(gaussian_vector(rng, 6));
  for (auto _ : state) benchmark::DoNotOptimize(enclosing_ball(pts).radius);
}
BENCHMARK(BM_EnclosingBall)->Arg(256)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_GeodesicSphere(benchmark::State& state) {
  const ImmersedManifold m = umbilical_sphere(0, 3, 2, 1.0);
  Rng rng(6);
  const VectorXd w = m.domain().random(rng);
  const TangentFrame f = tangent_frame(m, w);
  const VectorXd u = f.basis * random_unit_vector(rng, 2);
  const double len = 2.0 * std::numbers::pi;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_geodesic(m, w, u, len, len / static_cast<double>(state.range(0))).max_speed_drift);
  }
}
BENCHMARK(BM_GeodesicSphere)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_CircleFitHyper(benchmark::State& state) {
  Rng rng(7);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < state.range(0); ++i) {
    const double t = 3.0 * i / static_cast<double>(state.range(0));
    pts.emplace_back(1.5 + 2.0 * std::cos(t) + noise(rng), -0.5 + 2.0 * std::sin(t) + noise(rng));
  }
  for (auto _ : state) {
    const Circle2 c = circle_fit_hyper(pts);
    benchmark::DoNotOptimize(circle_fit_geometric(pts, c).radius);
  }
}
BENCHMARK(BM_CircleFitHyper)->Arg(100)->Arg(2000);

void BM_BowCheck(benchmark::State& state) {
  Rng rng(8);
  const DiscreteCurve c = random_bow_curve(-1, 1.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bow_chord_check(c, 1.0).margin);
}
BENCHMARK(BM_BowCheck)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
