// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "focalkit/algebra.hpp"
#include "focalkit/audit.hpp"
#include "focalkit/charts.hpp"
#include "focalkit/curves.hpp"
#include "focalkit/veronese.hpp"

using namespace focalkit;
using std::numbers::pi;

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Jung flags of every flat audit, filled by criteria 1-3.
std::vector<std::pair<std::string, AuditReport>> flat_audits;

bool report(int id, const std::string& title, double budget, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = seconds_since(t0);
  if (budget > 0.0) out.require(secs < budget, "runtime budget");
  std::printf("criterion %d %s: %s (%.2f s)%s\n", id, title.c_str(), out.ok ? "PASS" : "FAIL", secs,
              out.detail.str().c_str());
  std::fflush(stdout);
  return out.ok;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

AlgebraElement random_element(Field f, Rng& rng) {
  std::normal_distribution<double> g;
  AlgebraElement e = AlgebraElement::real(f, 0.0);
  for (int i = 0; i < field_dim(f); ++i) e[i] = g(rng);
  return e;
}

struct BowDraw {
  int kappa;
  double r;
  BowReport rep;
};
std::vector<BowDraw> bow_draws;

}  // namespace

int main() {
  bool all = true;

  all &= report(1, "umbilical spheres", 0.0, [](Outcome& o) {
    const std::pair<int, double> cases[] = {{0, 0.5}, {0, 2.0}, {1, 0.7}, {-1, 1.2}};
    double worst_ratio = 0.0, slowest = 0.0;
    for (const auto& [kappa, rho] : cases) {
      for (int n = 3; n <= 5; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        const AuditReport r = audit(umbilical_sphere(kappa, n, 2, rho));
        slowest = std::max(slowest, seconds_since(t0));
        const std::string tag = "kappa=" + std::to_string(kappa) + " rho=" + num(rho) + " n=" + std::to_string(n);
        o.require(std::abs(r.focal_radius.value_or_inf() - rho) <= 1e-4 * rho, tag + " focal radius");
        o.require(std::abs(r.diameter.value - 2 * rho) <= 1e-4, tag + " diameter");
        o.require(std::abs(r.ratio - 2.0) <= 5e-4, tag + " ratio");
        worst_ratio = std::max(worst_ratio, std::abs(r.ratio - 2.0));
        if (kappa == 0) flat_audits.emplace_back("umbilical " + tag, r);
      }
    }
    o.require(slowest < 10.0, "per-case runtime");
    o.detail << " 12 cases, max |ratio - 2| = " << num(worst_ratio) << ", slowest " << num(slowest) << " s";
  });

  all &= report(2, "Veronese equality", 0.0, [](Outcome& o) {
    const std::pair<Field, int> cases[] = {{Field::R, 2}, {Field::R, 3}, {Field::C, 1},
                                           {Field::C, 2}, {Field::H, 1}, {Field::O, 1}};
    double slowest = 0.0;
    for (const auto& [f, l] : cases) {
      const auto t0 = std::chrono::steady_clock::now();
      AuditOptions opts;
      opts.probe = ProbeMode::always;
      opts.probe_geodesics = 20;
      const AuditReport r = audit(veronese_manifold(f, l), opts);
      slowest = std::max(slowest, seconds_since(t0));
      const std::string tag = std::string(field_name(f)) + "P" + std::to_string(l);
      o.require(std::abs(r.diameter.value - kSqrt2) <= 1e-3, tag + " diameter " + num(r.diameter.value));
      o.require(std::abs(r.curvature.value - kSqrt2) <= 5e-3, tag + " curvature " + num(r.curvature.value));
      o.require(std::abs(r.ratio - 2.0) <= 5e-3, tag + " ratio " + num(r.ratio));
      const PlanarGeodesicStats& g = *r.planar_geodesics;
      o.require(g.succeeded == 20, tag + " geodesics integrated");
      o.require(g.max_plane_residual < 1e-4, tag + " plane residual " + num(g.max_plane_residual));
      o.require(g.radius_dispersion < 1e-3, tag + " radius dispersion " + num(g.radius_dispersion));
      o.detail << " " << tag << ": D=" << num(r.diameter.value) << " c=" << num(r.curvature.value)
               << " plane=" << num(g.max_plane_residual) << ";";
      flat_audits.emplace_back(tag, r);
    }
    o.require(slowest < 60.0, "per-case runtime");
  });

  all &= report(3, "Clifford torus constants", 30.0, [](Outcome& o) {
    const AuditReport r = audit(clifford_torus_example());
    o.require(std::abs(r.curvature.value - std::sqrt(1.5)) <= 1e-4, "curvature");
    o.require(std::abs(r.diameter.value - std::sqrt(3.0)) <= 1e-3, "diameter");
    o.require(std::abs(r.circumradius->value - 1.0) <= 1e-4, "circumradius");
    o.require(std::abs(r.ratio - 3.0 / kSqrt2) <= 5e-3, "ratio");
    o.require(r.ratio > 2.0, "ratio above two");
    o.detail << " c=" << num(r.curvature.value) << " D=" << num(r.diameter.value) << " R=" << num(r.circumradius->value)
             << " ratio=" << num(r.ratio);
    flat_audits.emplace_back("clifford torus", r);
  });

  all &= report(4, "Jung sandwich", 0.0, [](Outcome& o) {
    for (const auto& [name, r] : flat_audits) {
      const double d = r.diameter.value, big_r = r.circumradius->value;
      o.require(kSqrt2 * big_r < d + 1e-6, name + " lower");
      o.require(d <= 2.0 * big_r + 1e-6, name + " upper");
    }
    o.detail << " " << flat_audits.size() << " flat audits";
  });

  all &= report(5, "Bow suite", 60.0, [](Outcome& o) {
    double worst_half = 0.0;
    for (int kappa : {0, 1, -1}) {
      for (double r : {0.5, 1.0, 2.0}) {
        const BowReport rep = bow_chord_check(half_circle_curve(kappa, 2, r, 2001), r);
        // On S^2 a circle of radius r > pi/2 is the circle of radius pi - r about the
        // antipode; the margin is taken against that circle's chord.
        o.require(std::abs(rep.margin) < 1e-5,
                  "half circle kappa=" + std::to_string(kappa) + " r=" + num(r) + " margin " + num(rep.margin));
        worst_half = std::max(worst_half, std::abs(rep.margin));
      }
    }
    const BowReport helix = bow_chord_check(helix_curve(0.9, 0.3, pi, 2001), 1.0);
    o.require(helix.margin > 0.05, "helix margin");

    Rng rng(derive_seed(17, 5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 1e9;
    for (int i = 0; i < 500; ++i) {
      const int kappa = i % 3 == 0 ? 0 : (i % 3 == 1 ? 1 : -1);
      const double r = kappa == 1 ? 0.3 + 1.2 * unit(rng) : 0.3 + 1.7 * unit(rng);
      const BowReport rep = bow_chord_check(random_bow_curve(kappa, r, rng), r);
      worst = std::min(worst, rep.margin);
      o.require(rep.margin >= -1e-4, "random curve " + std::to_string(i));
      bow_draws.push_back({kappa, r, rep});
    }
    o.detail << " max |half-circle margin| = " << num(worst_half) << ", helix margin = " << num(helix.margin)
             << ", min random margin = " << num(worst) << " over 500";
  });

  all &= report(6, "rigidity direction", 60.0, [](Outcome& o) {
    int near = 0;
    double worst = 0.0;
    for (const auto& d : bow_draws) {
      if (d.rep.margin < 1e-3 * d.r) {
        ++near;
        const double res = d.rep.planarity ? d.rep.planarity->max_residual() : 1.0;
        worst = std::max(worst, res);
        o.require(res < 1e-2, "near-equality curve not circular");
      }
    }
    o.require(near > 0, "no near-equality draws");
    AuditOptions opts;
    opts.probe = ProbeMode::always;
    const AuditReport r = audit(ellipsoid({1.0, 1.0, 1.3}, 3), opts);
    const double res = std::max(r.planar_geodesics->max_plane_residual, r.planar_geodesics->max_circle_defect);
    o.require(r.ratio > 2.0 + 1e-3, "ellipsoid ratio");
    o.require(res > 1e-3, "ellipsoid planarity residual");
    o.detail << " " << near << " near-equality curves, worst residual " << num(worst) << "; ellipsoid ratio "
             << num(r.ratio) << ", residual " << num(res);
  });

  all &= report(7, "algebra properties", 5.0, [](Outcome& o) {
    Rng rng(derive_seed(17, 7));
    double worst_norm = 0.0, worst_alt = 0.0;
    for (Field f : {Field::R, Field::C, Field::H, Field::O}) {
      for (int i = 0; i < 10000; ++i) {
        const auto a = random_element(f, rng), b = random_element(f, rng);
        const double na = norm(a), nb = norm(b);
        worst_norm = std::max(worst_norm, std::abs(norm(a * b) - na * nb) / (na * nb));
        if (f == Field::O) {
          const double scale = na * na * nb;
          worst_alt = std::max(worst_alt, max_abs_diff(a * (a * b), (a * a) * b) / scale);
          worst_alt = std::max(worst_alt, max_abs_diff((b * a) * a, b * (a * a)) / scale);
        }
      }
    }
    const auto e1 = AlgebraElement::unit(Field::O, 1), e2 = AlgebraElement::unit(Field::O, 2),
               e4 = AlgebraElement::unit(Field::O, 4);
    const double witness = max_abs_diff((e1 * e2) * e4, e1 * (e2 * e4));
    o.require(worst_norm <= 1e-12, "norm multiplicativity");
    o.require(worst_alt <= 1e-12, "alternativity");
    o.require(witness > 0.5, "non-associativity witness");
    o.detail << " norm defect " << num(worst_norm) << ", alternativity defect " << num(worst_alt)
             << ", |(e1e2)e4 - e1(e2e4)| = " << num(witness);
  });

  all &= report(8, "Veronese certification", 30.0, [](Outcome& o) {
    const std::pair<Field, int> cases[] = {{Field::R, 1}, {Field::R, 2}, {Field::R, 3}, {Field::C, 1}, {Field::C, 2},
                                           {Field::H, 1}, {Field::H, 2}, {Field::O, 1}, {Field::O, 2}};
    double worst_sphere = 0.0;
    int total = 0;
    for (const auto& [f, l] : cases) {
      Rng rng(derive_seed(17, static_cast<std::uint64_t>(80 + 10 * l) + static_cast<std::uint64_t>(f)));
      const FMatrix center = (1.0 / (l + 1)) * FMatrix::identity(f, l + 1);
      int passed = 0;
      for (int i = 0; i < 1000; ++i) {
        const FMatrix p = projector_from_line(random_line(f, l, rng)).matrix();
        const FMatrix d = p - center;
        const double sphere = std::abs(mat_inner(d, d) - static_cast<double>(l) / (l + 1));
        worst_sphere = std::max(worst_sphere, sphere);
        if (certify_point(p, 1e-9).passed() && sphere < 1e-9) ++passed;
      }
      total += passed;
      o.require(passed == 1000, std::string(field_name(f)) + "P" + std::to_string(l));
    }
    o.detail << " " << total << "/9000 certified, max sphere residual " << num(worst_sphere);
  });

  all &= report(9, "finite-difference oracle", 10.0, [](Outcome& o) {
    Rng rng(derive_seed(17, 9));
    double worst = 0.0;
    const ImmersedManifold ms[] = {umbilical_sphere(0, 3, 2, 1.0), clifford_torus_example()};
    for (const auto& m : ms) {
      for (int i = 0; i < 100; ++i) {
        const VectorXd w = m.domain().random(rng);
        const TangentFrame f = tangent_frame(m, w, DiffMode::analytic);
        const VectorXd dir = f.param_dirs * random_unit_vector(rng, m.dim());
        const ShapeData a = second_fundamental_form(m, w, dir, DiffMode::analytic);
        const ShapeData b = second_fundamental_form(m, w, dir, DiffMode::finite_difference);
        worst = std::max(worst, (a.second_fundamental - b.second_fundamental).norm() / a.normal_curvature);
      }
    }
    o.require(worst < 1e-5, "relative disagreement");
    o.detail << " max relative difference " << num(worst) << " over 200 pairs";
  });

  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
