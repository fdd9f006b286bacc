#include "focalkit/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "focalkit/enclosing_ball.hpp"
#include "focalkit/error.hpp"
#include "focalkit/parallel.hpp"

namespace focalkit {

namespace {

std::string format_params(const VectorXd& w) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w[i];
  os << ")";
  return os.str();
}

CurvatureSummary summarize(const std::vector<double>& v) {
  CurvatureSummary s;
  s.count = v.size();
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(acc / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

// Indices of the `count` largest values; ties go to the lower index.
std::vector<std::size_t> top_indices(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  idx.resize(count);
  return idx;
}

// Maximizes f on [lo, hi] by golden-section search.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Rough extent of the image: largest distance from the first sample.
double sample_extent(const ImmersedManifold& m, const std::vector<VectorXd>& params) {
  if (params.empty()) return 1.0;
  const VectorXd p0 = m.point(params[0]);
  double ext = 0.0;
  const std::size_t n = std::min<std::size_t>(params.size(), 128);
  for (std::size_t i = 1; i < n; ++i) ext = std::max(ext, m.ambient().distance(p0, m.point(params[i])));
  return ext > 0.0 ? ext : 1.0;
}

// Coordinate golden-section sweeps maximizing objective(w) from w0.
template <class F>
std::pair<VectorXd, double> coordinate_sweeps(const ParameterDomain& dom, F&& objective, VectorXd w,
                                              double step, int max_sweeps, int* sweeps_used) {
  double best = objective(w);
  int sweeps = 0;
  for (; sweeps < max_sweeps && step > 1e-10; ++sweeps) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      auto along = [&](double t) {
        VectorXd trial = w;
        trial[i] += t;
        return objective(dom.canonical(trial));
      };
      const auto [t, val] = golden_max(along, -step, step, step * 1e-3);
      if (val > best) {
        VectorXd trial = w;
        trial[i] += t;
        w = dom.canonical(trial);
        best = val;
        moved = std::max(moved, std::abs(t));
      }
    }
    step = std::clamp(4.0 * moved, step / 8.0, step);
  }
  if (sweeps_used) *sweeps_used = sweeps;
  return {w, best};
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter domains

ParameterDomain ParameterDomain::homogeneous(int k) {
  if (k < 2) throw DomainError("homogeneous domain needs at least 2 parameters");
  ParameterDomain d;
  d.kind = DomainKind::homogeneous;
  d.param_dim = k;
  return d;
}

ParameterDomain ParameterDomain::periodic_box(VectorXd lower, VectorXd upper) {
  if (lower.size() != upper.size() || lower.size() < 1) throw DomainError("periodic box bounds mismatch");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(upper[i] > lower[i])) throw DomainError("periodic box has an empty side");
  ParameterDomain d;
  d.kind = DomainKind::periodic_box;
  d.param_dim = static_cast<int>(lower.size());
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  return d;
}

VectorXd ParameterDomain::canonical(const VectorXd& w) const {
  if (kind == DomainKind::homogeneous) {
    const double len = w.norm();
    if (len == 0.0) throw DomainError("homogeneous parameter vector is zero");
    return w / len;
  }
  VectorXd r = w;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double period = upper[i] - lower[i];
    r[i] = lower[i] + (r[i] - lower[i]) - period * std::floor((r[i] - lower[i]) / period);
  }
  return r;
}

VectorXd ParameterDomain::random(Rng& rng) const {
  if (kind == DomainKind::homogeneous) return random_unit_vector(rng, param_dim);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VectorXd w(param_dim);
  for (int i = 0; i < param_dim; ++i) w[i] = lower[i] + u(rng) * (upper[i] - lower[i]);
  return w;
}

std::vector<VectorXd> ParameterDomain::samples(std::size_t count, std::uint64_t seed) const {
  std::vector<VectorXd> out;
  out.reserve(count);
  if (kind == DomainKind::periodic_box) {
    int g = static_cast<int>(std::floor(std::pow(static_cast<double>(count), 1.0 / param_dim) + 1e-9));
    g = std::max(g, 1);
    std::size_t total = 1;
    for (int i = 0; i < param_dim; ++i) total *= static_cast<std::size_t>(g);
    for (std::size_t idx = 0; idx < total; ++idx) {
      VectorXd w(param_dim);
      std::size_t rem = idx;
      // Last coordinate varies fastest, so index order is lexicographic.
      for (int i = param_dim - 1; i >= 0; --i) {
        const auto j = static_cast<double>(rem % static_cast<std::size_t>(g));
        rem /= static_cast<std::size_t>(g);
        w[i] = lower[i] + (upper[i] - lower[i]) * j / g;
      }
      out.push_back(std::move(w));
    }
  }
  Rng rng(derive_seed(seed, 0x5a4d));
  while (out.size() < count) out.push_back(random(rng));
  return out;
}

std::size_t grid_budget(int per_axis, int m, std::size_t cap) {
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) {
    total *= static_cast<std::size_t>(per_axis);
    if (total >= cap) return cap;
  }
  return total;
}

// ---------------------------------------------------------------------------
// ImmersedManifold

ImmersedManifold::ImmersedManifold(std::string name, SpaceForm ambient, int dim, ParameterDomain domain, Chart chart)
    : name_(std::move(name)), ambient_(ambient), dim_(dim), domain_(std::move(domain)), chart_(std::move(chart)) {
  if (dim < 1) throw DomainError("manifold dimension must be positive");
  if (dim >= ambient.dim()) throw DomainError("manifold dimension must be below the ambient dimension");
  if (domain_.param_dim < dim) throw DomainError("parameter count is below the manifold dimension");
  if (domain_.kind == DomainKind::periodic_box && domain_.param_dim != dim) {
    throw DomainError("periodic box domains need exactly m parameters");
  }
  if (!chart_) throw DomainError("chart callback is empty");
}

ImmersedManifold& ImmersedManifold::with_analytic(ChartJacobian jacobian, ChartSecond second) {
  jacobian_ = std::move(jacobian);
  second_ = std::move(second);
  return *this;
}

ImmersedManifold& ImmersedManifold::with_config(SampleConfig config) {
  config_ = config;
  return *this;
}

VectorXd ImmersedManifold::point(const VectorXd& w) const { return ambient_.project(chart_(w)); }

bool ImmersedManifold::use_analytic(DiffMode mode) const {
  if (mode == DiffMode::analytic && !jacobian_) throw DomainError("no analytic derivatives supplied for " + name_);
  return mode == DiffMode::analytic || (mode == DiffMode::automatic && jacobian_);
}

MatrixXd ImmersedManifold::jacobian(const VectorXd& w, DiffMode mode) const {
  if (use_analytic(mode)) return jacobian_(w);
  const double h = config_.jacobian_step;
  const int k = param_dim();
  MatrixXd j(ambient_.coord_dim(), k);
  for (int i = 0; i < k; ++i) {
    VectorXd wp = w, wm = w;
    wp[i] += h;
    wm[i] -= h;
    j.col(i) = (point(wp) - point(wm)) / (2.0 * h);
  }
  return j;
}

VectorXd ImmersedManifold::second_derivative(const VectorXd& w, const VectorXd& a, DiffMode mode) const {
  if (use_analytic(mode)) return second_(w, a);
  const double h = config_.fd_step;
  const VectorXd f0 = point(w);
  auto central = [&](double step) {
    return VectorXd((point(w + step * a) - 2.0 * f0 + point(w - step * a)) / (step * step));
  };
  const VectorXd d1 = central(h);
  const VectorXd d2 = central(h / 2.0);
  const double scale = std::max(1.0, d1.cwiseAbs().maxCoeff());
  if ((d1 - d2).cwiseAbs().maxCoeff() <= 1e-6 * scale) return d1;
  // Richardson extrapolation removes the h^2 term.
  return (4.0 * d2 - d1) / 3.0;
}

// ---------------------------------------------------------------------------
// Frames and the second fundamental form

TangentFrame tangent_frame(const ImmersedManifold& m, const VectorXd& params, DiffMode mode) {
  const SpaceForm& amb = m.ambient();
  const MatrixXd j = m.jacobian(params, mode);
  MatrixXd g;
  if (amb.kappa() == -1) {
    MatrixXd ej = j;
    ej.row(0) *= -1.0;
    g = j.transpose() * ej;
  } else {
    g = j.transpose() * j;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
  const int k = static_cast<int>(g.rows());
  const int dim = m.dim();
  const VectorXd& ev = es.eigenvalues();
  const double smin = std::sqrt(std::max(0.0, ev[k - dim]));
  if (!(smin > 1e-7)) {
    throw ImmersionError(m.name() + ": rank-deficient differential at parameters " + format_params(params) +
                         " (smallest singular value " + std::to_string(smin) + ")");
  }
  if (k > dim) {
    const double extra = std::sqrt(std::max(0.0, ev[k - dim - 1]));
    const double top = std::sqrt(std::max(0.0, ev[k - 1]));
    if (extra > 1e-5 * top) {
      throw ImmersionError(m.name() + ": differential rank exceeds the declared dimension " + std::to_string(dim) +
                           " at parameters " + format_params(params));
    }
  }
  TangentFrame f;
  f.params = params;
  f.point = m.point(params);
  f.param_dirs = es.eigenvectors().rightCols(dim);
  for (int c = 0; c < dim; ++c) f.param_dirs.col(c) /= std::sqrt(ev[k - dim + c]);
  f.basis = j * f.param_dirs;
  f.min_singular = smin;
  return f;
}

VectorXd normal_component(const ImmersedManifold& m, const TangentFrame& frame, const VectorXd& accel) {
  const SpaceForm& amb = m.ambient();
  VectorXd n = amb.tangent_part(frame.point, accel);
  for (Eigen::Index c = 0; c < frame.basis.cols(); ++c) {
    const VectorXd e = frame.basis.col(c);
    n -= amb.inner(n, e) * e;
  }
  return n;
}

ShapeData second_fundamental_form(const ImmersedManifold& m, const VectorXd& params, const VectorXd& direction,
                                  DiffMode mode) {
  if (direction.size() != m.param_dim()) throw DomainError("direction has the wrong number of parameters");
  const TangentFrame frame = tangent_frame(m, params, mode);
  // Project onto the horizontal directions so kernel components drop out.
  const MatrixXd j = frame.basis;
  const VectorXd coeffs = frame.param_dirs.completeOrthogonalDecomposition().solve(direction);
  VectorXd u = j * coeffs;
  const double speed = m.ambient().norm(u);
  if (!(speed > 1e-12)) throw DomainError("direction is not tangent to the manifold (zero image)");
  const VectorXd a = frame.param_dirs * coeffs / speed;

  ShapeData sd;
  sd.point = frame.point;
  sd.tangent = u / speed;
  sd.second_fundamental = normal_component(m, frame, m.second_derivative(params, a, mode));
  sd.normal_curvature = m.ambient().norm(sd.second_fundamental);
  return sd;
}

SecondFundamentalTensor::SecondFundamentalTensor(const ImmersedManifold& m, TangentFrame frame, DiffMode mode)
    : ambient_(m.ambient()), frame_(std::move(frame)), dim_(m.dim()) {
  ii_.resize(static_cast<std::size_t>(dim_ * dim_));
  std::vector<VectorXd> diag(static_cast<std::size_t>(dim_));
  const VectorXd& w = frame_.params;
  for (int i = 0; i < dim_; ++i) {
    diag[i] = m.second_derivative(w, frame_.param_dirs.col(i), mode);
  }
  for (int i = 0; i < dim_; ++i) {
    ii_[i * dim_ + i] = normal_component(m, frame_, diag[i]);
    for (int j = i + 1; j < dim_; ++j) {
      // Polarization: B(a,b) = (D(a+b) - D(a) - D(b)) / 2.
      const VectorXd sum = m.second_derivative(w, frame_.param_dirs.col(i) + frame_.param_dirs.col(j), mode);
      const VectorXd b = normal_component(m, frame_, 0.5 * (sum - diag[i] - diag[j]));
      ii_[i * dim_ + j] = b;
      ii_[j * dim_ + i] = b;
    }
  }
}

VectorXd SecondFundamentalTensor::value(const VectorXd& y) const {
  VectorXd v = VectorXd::Zero(ii_[0].size());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) v += (y[i] * y[j]) * ii_[i * dim_ + j];
  return v;
}

double SecondFundamentalTensor::normal_curvature(const VectorXd& y) const {
  const double yy = y.squaredNorm();
  if (yy == 0.0) throw DomainError("zero tangent direction");
  return ambient_.norm(value(y)) / yy;
}

MatrixXd SecondFundamentalTensor::shape_operator(const VectorXd& xi) const {
  MatrixXd s(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s(i, j) = ambient_.inner(ii_[i * dim_ + j], xi);
  return s;
}

DirectionMax maximize_over_directions(const SecondFundamentalTensor& t, int restarts, const VectorXd* warm_start) {
  const int m = t.dim();
  const SpaceForm& amb = t.ambient();
  DirectionMax best;
  if (m == 1) {
    best.coefficients = VectorXd::Ones(1);
    best.value = t.normal_curvature(best.coefficients);
    return best;
  }

  auto objective = [&](const VectorXd& y) {
    const VectorXd v = t.value(y);
    return amb.inner(v, v);
  };
  auto gradient = [&](const VectorXd& y) {
    const VectorXd v = t.value(y);
    VectorXd g = VectorXd::Zero(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g[i] += amb.inner(v, t.component(i, j)) * y[j];
    return VectorXd(4.0 * g);
  };

  const auto dirs = low_discrepancy_directions(m, std::max(4 * m, 4 * restarts));
  std::vector<double> scores(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) scores[i] = objective(dirs[i]);
  std::vector<VectorXd> starts;
  if (warm_start && warm_start->size() == m && warm_start->norm() > 0.0) starts.push_back(warm_start->normalized());
  for (std::size_t i : top_indices(scores, static_cast<std::size_t>(std::max(restarts, 1)))) starts.push_back(dirs[i]);

  double best_f = -1.0;
  for (const VectorXd& y0 : starts) {
    VectorXd y = y0;
    double f = objective(y);
    double step = 1.0 / std::max(1e-12, 4.0 * f + 1e-12);
    for (int it = 0; it < 300; ++it) {
      VectorXd g = gradient(y);
      g -= g.dot(y) * y;
      const double gn2 = g.squaredNorm();
      if (gn2 <= 1e-24 * std::max(f * f, 1e-30)) break;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        const VectorXd trial = (y + step * g).normalized();
        const double ft = objective(trial);
        if (ft >= f + 1e-4 * step * gn2) {
          y = trial;
          f = ft;
          step *= 2.0;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (f > best_f) {
      best_f = f;
      best.coefficients = y;
    }
  }
  best.value = std::sqrt(std::max(0.0, best_f));
  return best;
}

// ---------------------------------------------------------------------------
// Maximum normal curvature and focal radius

namespace {

struct PointMax {
  double value = 0.0;
  VectorXd tangent;
  std::vector<double> fixed;
  double min_singular = 0.0;
};

PointMax evaluate_point(const ImmersedManifold& m, const VectorXd& w, int restarts,
                        const std::vector<VectorXd>& fixed_dirs, const VectorXd* warm_tangent) {
  const DiffMode mode = m.config().diff_mode;
  SecondFundamentalTensor t(m, tangent_frame(m, w, mode), mode);
  VectorXd warm;
  if (warm_tangent) {
    warm = VectorXd(m.dim());
    for (int c = 0; c < m.dim(); ++c) warm[c] = m.ambient().inner(*warm_tangent, t.frame().basis.col(c));
  }
  const DirectionMax dm = maximize_over_directions(t, restarts, warm_tangent ? &warm : nullptr);
  PointMax pm;
  pm.value = dm.value;
  pm.tangent = t.frame().basis * dm.coefficients;
  pm.min_singular = t.frame().min_singular;
  pm.fixed.reserve(fixed_dirs.size());
  for (const VectorXd& y : fixed_dirs) pm.fixed.push_back(t.normal_curvature(y));
  return pm;
}

}  // namespace

CurvatureMax max_normal_curvature(const ImmersedManifold& m) {
  const SampleConfig& cfg = m.config();
  const std::size_t budget = grid_budget(cfg.grid_per_axis, m.dim(), cfg.curvature_cap);
  const auto params = m.domain().samples(budget, derive_seed(cfg.seed, 1));
  const auto fixed_dirs = low_discrepancy_directions(m.dim(), std::min(2 * m.dim(), 8));

  std::vector<PointMax> results(params.size());
  parallel_for(params.size(), [&](std::size_t i) {
    results[i] = evaluate_point(m, params[i], cfg.direction_restarts, fixed_dirs, nullptr);
  });

  std::vector<double> values(results.size());
  std::vector<double> all_fixed;
  all_fixed.reserve(results.size() * fixed_dirs.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    values[i] = results[i].value;
    all_fixed.insert(all_fixed.end(), results[i].fixed.begin(), results[i].fixed.end());
  }

  CurvatureMax out;
  out.grid_points = params.size();
  out.samples = summarize(all_fixed);
  out.pointwise_max = summarize(values);

  // Compass search over the horizontal parameter directions, objective =
  // direction-maximized normal curvature.
  const double extent = sample_extent(m, params);
  const double step0 = extent / std::pow(static_cast<double>(params.size()), 1.0 / m.dim());
  const double min_step = 1e-7 * extent;
  // Stay where the chart is well conditioned; near a chart singularity the
  // amplified roundoff would read as curvature.
  std::vector<double> sings(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) sings[i] = results[i].min_singular;
  std::nth_element(sings.begin(), sings.begin() + static_cast<std::ptrdiff_t>(sings.size() / 2), sings.end());
  const double sing_floor = 1e-3 * sings[sings.size() / 2];
  std::vector<double> eligible = values;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].min_singular < sing_floor) eligible[i] = -1.0;
  }
  const auto cand = top_indices(eligible, static_cast<std::size_t>(std::max(cfg.refine_candidates, 1)));

  struct Refined {
    double value;
    VectorXd params, tangent;
    bool converged;
    int evals;
  };
  std::vector<Refined> refined(cand.size());
  parallel_for(cand.size(), [&](std::size_t c) {
    VectorXd w = params[cand[c]];
    PointMax cur = results[cand[c]];
    double step = step0;
    int evals = 0;
    while (step > min_step && evals < cfg.refine_budget) {
      const TangentFrame frame = tangent_frame(m, w, cfg.diff_mode);
      bool improved = false;
      for (int i = 0; i < m.dim() && !improved; ++i) {
        for (double sign : {1.0, -1.0}) {
          const VectorXd trial = m.domain().canonical(w + sign * step * frame.param_dirs.col(i));
          PointMax pm;
          ++evals;
          try {
            pm = evaluate_point(m, trial, 2, {}, &cur.tangent);
          } catch (const ImmersionError&) {
            continue;
          }
          if (pm.min_singular < sing_floor) continue;
          if (pm.value > cur.value * (1.0 + 1e-12)) {
            w = trial;
            cur = pm;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    refined[c] = {cur.value, w, cur.tangent, step <= min_step, evals};
  });

  out.value = -1.0;
  out.converged = true;
  for (const Refined& r : refined) {
    out.refine_evaluations += r.evals;
    out.converged = out.converged && r.converged;
    if (r.value > out.value) {
      out.value = r.value;
      out.params = r.params;
      out.tangent = r.tangent;
    }
  }
  return out;
}

FocalDistance focal_radius(const ImmersedManifold& m, const CurvatureMax& cmax) {
  return focal_distance_from_curvature(m.ambient().kappa(), cmax.value);
}

FocalDistance focal_radius(const ImmersedManifold& m) { return focal_radius(m, max_normal_curvature(m)); }

// ---------------------------------------------------------------------------
// Extrinsic diameter and circumradius

namespace {

double initial_param_step(const ImmersedManifold& m, std::size_t count) {
  const double per_axis = std::pow(static_cast<double>(count), 1.0 / m.dim());
  if (m.domain().kind == DomainKind::homogeneous) return 2.0 / per_axis;
  return 2.0 * (m.domain().upper - m.domain().lower).maxCoeff() / per_axis;
}

}  // namespace

DiameterResult extrinsic_diameter(const ImmersedManifold& m) {
  const SampleConfig& cfg = m.config();
  const auto params = m.domain().samples(cfg.diameter_samples, derive_seed(cfg.seed, 2));
  const std::size_t n = params.size();
  std::vector<VectorXd> pts(n);
  parallel_for(n, [&](std::size_t i) { pts[i] = m.point(params[i]); });

  // Farthest partner of each sample.
  std::vector<double> far(n, 0.0);
  std::vector<std::size_t> partner(n, 0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = m.ambient().distance(pts[i], pts[j]);
      if (d > far[i]) {
        far[i] = d;
        partner[i] = j;
      }
    }
  });

  DiameterResult out;
  out.sampled_points = n;
  if (n < 2) return out;
  out.sampled_value = *std::max_element(far.begin(), far.end());

  const auto cand = top_indices(far, static_cast<std::size_t>(std::max(cfg.refine_candidates, 1)));
  const double step0 = initial_param_step(m, n);
  struct Refined {
    double value;
    VectorXd a, b;
    int sweeps;
  };
  std::vector<Refined> refined(cand.size());
  parallel_for(cand.size(), [&](std::size_t c) {
    VectorXd a = params[cand[c]];
    VectorXd b = params[partner[cand[c]]];
    double best = far[cand[c]];
    int total = 0;
    double step = step0;
    // Alternate between the two parameter blocks.
    for (int round = 0; round < 200 && step > 1e-10; ++round) {
      const VectorXd pb = m.point(b);
      int used = 0;
      auto [na, va] = coordinate_sweeps(
          m.domain(), [&](const VectorXd& w) { return m.ambient().distance(m.point(w), pb); }, a, step, 1, &used);
      const VectorXd pa = m.point(na);
      auto [nb, vb] = coordinate_sweeps(
          m.domain(), [&](const VectorXd& w) { return m.ambient().distance(pa, m.point(w)); }, b, step, 1, &used);
      const double moved = std::max((na - a).norm(), (nb - b).norm());
      a = na;
      b = nb;
      const double gain = vb - best;
      best = std::max(best, vb);
      total = round + 1;
      step = gain > 1e-15 ? std::clamp(4.0 * moved, step / 8.0, step) : step / 8.0;
    }
    refined[c] = {best, a, b, total};
  });

  out.value = -1.0;
  for (const Refined& r : refined) {
    out.refine_sweeps += r.sweeps;
    if (r.value > out.value) {
      out.value = r.value;
      out.params_a = r.a;
      out.params_b = r.b;
    }
  }
  out.value = std::max(out.value, out.sampled_value);
  return out;
}

CircumradiusResult circumradius(const ImmersedManifold& m) {
  if (m.ambient().kappa() != 0) {
    throw UnsupportedAmbientError("circumradius is only defined here for Euclidean ambients (got " +
                                  m.ambient().describe() + ")");
  }
  const SampleConfig& cfg = m.config();
  const auto params = m.domain().samples(cfg.diameter_samples, derive_seed(cfg.seed, 3));
  std::vector<VectorXd> pts(params.size());
  parallel_for(params.size(), [&](std::size_t i) { pts[i] = m.point(params[i]); });

  CircumradiusResult out;
  EnclosingBall ball = enclosing_ball(pts);
  out.sample_radius = ball.radius;
  const double step0 = initial_param_step(m, params.size());

  double verified = ball.radius;
  for (int round = 0; round < 30; ++round) {
    out.rounds = round + 1;
    std::vector<double> dist(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) dist[i] = (pts[i] - ball.center).norm();
    const auto cand = top_indices(dist, 4);
    std::vector<std::pair<double, VectorXd>> found(cand.size());
    parallel_for(cand.size(), [&](std::size_t c) {
      auto [w, val] = coordinate_sweeps(
          m.domain(), [&](const VectorXd& x) { return (m.point(x) - ball.center).norm(); }, params[cand[c]],
          step0, 200, nullptr);
      found[c] = {val, w};
    });
    verified = ball.radius;
    bool grew = false;
    for (const auto& [val, w] : found) {
      verified = std::max(verified, val);
      if (val > ball.radius * (1.0 + 1e-12) + 1e-13) {
        pts.push_back(m.point(w));
        grew = true;
      }
    }
    if (!grew) break;
    ball = enclosing_ball(pts);
  }
  out.value = verified;
  out.center = ball.center;
  return out;
}

void validate_immersion(const ImmersedManifold& m, std::size_t samples) {
  const auto params = m.domain().samples(samples, derive_seed(m.config().seed, 4));
  for (const VectorXd& w : params) {
    const VectorXd x = m.raw_point(w);
    if (x.size() != m.ambient().coord_dim()) {
      throw ImmersionError(m.name() + ": chart returns " + std::to_string(x.size()) + " coordinates, expected " +
                           std::to_string(m.ambient().coord_dim()));
    }
    const double r = m.ambient().constraint_residual(x);
    if (!(r <= 1e-9)) {
      throw ImmersionError(m.name() + ": chart leaves the " + m.ambient().describe() + " model at parameters " +
                           format_params(w) + " (residual " + std::to_string(r) + ")");
    }
    tangent_frame(m, w, m.config().diff_mode);
  }
}

}  // namespace focalkit
