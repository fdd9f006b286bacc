#include "focalkit/veronese.hpp"

#include <cmath>
#include <numbers>

#include "focalkit/charts.hpp"
#include "focalkit/error.hpp"

namespace focalkit {

namespace {

void check_field_size(Field f, int l) {
  if (l < 1) throw DomainError("projective dimension l must be at least 1");
  if (f == Field::O && l > 2) throw DomainError("octonionic projective spaces exist only for l = 1, 2");
}

bool has_real_coordinate(const Line& v) {
  for (const auto& a : v) {
    double imag = 0.0;
    for (int c = 1; c < a.dim(); ++c) imag = std::max(imag, std::abs(a[c]));
    if (imag <= 1e-12) return true;
  }
  return false;
}

// Hermitian coordinates of B(x,y) + B(y,x), B(x,y)_ij = x_i conj(y_j).
VectorXd sym_coords(const Line& x, const Line& y) {
  const int n = static_cast<int>(x.size());
  const Field f = x[0].field();
  const int d = field_dim(f);
  VectorXd out(hermitian_dimension(f, n));
  int k = 0;
  for (int i = 0; i < n; ++i) out[k++] = 2.0 * real_dot(x[i], y[i]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const AlgebraElement e = alg_mul(x[i], conj(y[j])) + alg_mul(y[i], conj(x[j]));
      for (int c = 0; c < d; ++c) out[k++] = std::sqrt(2.0) * e[c];
    }
  return out;
}

Line raw_line(Field f, int l, const VectorXd& w) {
  const int d = field_dim(f);
  Line v;
  v.reserve(static_cast<std::size_t>(l + 1));
  if (f == Field::O) {
    for (int i = 0; i < l; ++i) v.emplace_back(f, std::span<const double>(w.data() + 8 * i, 8));
    v.push_back(AlgebraElement::real(f, w[8 * l]));
  } else {
    for (int i = 0; i <= l; ++i) v.emplace_back(f, std::span<const double>(w.data() + d * i, static_cast<std::size_t>(d)));
  }
  return v;
}

// Orthonormal basis of the sum-zero vectors in R^{l+1} (Helmert), as columns.
MatrixXd helmert(int size) {
  MatrixXd h = MatrixXd::Zero(size, size - 1);
  for (int k = 1; k < size; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (int i = 0; i < k; ++i) h(i, k - 1) = s;
    h(k, k - 1) = -k * s;
  }
  return h;
}

// Linear map from Hermitian coordinates onto the trace-zero slice, (N-1) x N.
MatrixXd slice_map(Field f, int l) {
  const int n = hermitian_dimension(f, l + 1);
  MatrixXd s = MatrixXd::Zero(n - 1, n);
  s.topLeftCorner(l, l + 1) = helmert(l + 1).transpose();
  s.bottomRightCorner(n - l - 1, n - l - 1).setIdentity();
  return s;
}

VectorXd center_coords(Field f, int l) {
  VectorXd c = VectorXd::Zero(hermitian_dimension(f, l + 1));
  c.head(l + 1).setConstant(1.0 / (l + 1));
  return c;
}

}  // namespace

ProjectivePoint projector_from_line(const Line& v) {
  if (v.size() < 2) throw DomainError("a projective line needs at least two coordinates");
  const Field f = v[0].field();
  const int n = static_cast<int>(v.size());
  check_field_size(f, n - 1);
  double total = 0.0;
  for (const auto& a : v) {
    if (a.field() != f) throw DomainError("line coordinates mix algebras");
    total += norm2(a);
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw DomainError("line vector is not a unit vector (sum of squared norms " + std::to_string(total) + ")");
  }
  if (f == Field::O && !has_real_coordinate(v)) {
    throw ChartError("octonionic line has no real coordinate; canonicalize it (canonicalize_line) first");
  }
  FMatrix p(f, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = alg_mul(v[i], conj(v[j]));
  return ProjectivePoint(std::move(p));
}

Line canonicalize_line(const Line& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (norm(v[i]) > norm(v[k])) k = i;
  const double len = norm(v[k]);
  if (len == 0.0) throw DomainError("zero line vector");
  AlgebraElement u = conj(v[k]);
  u *= 1.0 / len;
  Line out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == k) {
      out.push_back(AlgebraElement::real(v[i].field(), len));
    } else {
      out.push_back(alg_mul(v[i], u));
    }
  }
  return out;
}

Line random_line(Field f, int l, Rng& rng) {
  check_field_size(f, l);
  VectorXd w = gaussian_vector(rng, veronese_param_dim(f, l));
  if (f == Field::O && l == 2) w[w.size() - 1] = std::abs(w[w.size() - 1]);
  return line_from_params(f, l, w);
}

PointCertificate certify_point(const FMatrix& m, double tol) {
  PointCertificate c;
  c.tolerance = tol;
  const int n = m.size();
  const int l = n - 1;
  const int d = field_dim(m.field());

  c.hermitian_residual = m.hermitian_residual();
  c.idempotency_residual = max_abs_diff(jordan_product(m, m), m);
  c.trace_residual = std::abs(m.real_trace() - 1.0);

  Eigen::JacobiSVD<MatrixXd> svd(real_representation(m));
  const VectorXd& sv = svd.singularValues();
  c.real_rank_residual = sv.size() > d ? sv[d] : 0.0;
  int above = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-8) ++above;
  c.field_rank = (above + d - 1) / d;
  if (is_associative(m.field())) {
    c.rank_residual = c.real_rank_residual;
  } else {
    // Left multiplication by an octonionic rank-one projector has real
    // rank above 8, so use the vanishing of M_ij M_jk - M_jj M_ik instead.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          c.rank_residual = std::max(c.rank_residual, max_abs_diff(alg_mul(m(i, j), m(j, k)), m(j, j).real_part() * m(i, k)));
    c.field_rank = c.rank_residual < 1e-8 ? 1 : std::max(2, c.field_rank);
  }

  if (l >= 1) {
    FMatrix centered = m - (1.0 / n) * FMatrix::identity(m.field(), n);
    c.sphere_residual = std::abs(mat_inner(centered, centered) - static_cast<double>(l) / n);
  }

  c.hermitian_ok = c.hermitian_residual <= tol;
  c.idempotent_ok = c.idempotency_residual <= tol;
  c.trace_ok = c.trace_residual <= tol;
  c.rank_ok = c.field_rank == 1 && c.rank_residual < 1e-8;
  c.sphere_ok = c.sphere_residual <= tol;
  return c;
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.field() != q.field() || p.l() != q.l()) throw DomainError("chordal_distance: shape mismatch");
  const FMatrix diff = p.matrix() - q.matrix();
  return std::sqrt(std::max(0.0, mat_inner(diff, diff)));
}

int veronese_param_dim(Field f, int l) {
  check_field_size(f, l);
  return f == Field::O ? 8 * l + 1 : field_dim(f) * (l + 1);
}

Line line_from_params(Field f, int l, const VectorXd& w) {
  if (w.size() != veronese_param_dim(f, l)) throw DomainError("wrong parameter count for the Veronese chart");
  const double len = w.norm();
  if (len == 0.0) throw DomainError("zero line vector");
  if (f == Field::O && l == 1) {
    // s = (t, z) on S^8 is the point (1/2) [[1 + t, z], [conj z, 1 - t]].
    const VectorXd s = w / len;
    const AlgebraElement z(f, std::span<const double>(s.data() + 1, 8));
    const double zn = norm(z);
    if (1.0 + s[0] < 1e-300 || (zn == 0.0 && s[0] < 0.0)) {
      return {AlgebraElement::real(f, 0.0), AlgebraElement::real(f, 1.0)};
    }
    const double a = std::sqrt(0.5 * (1.0 + s[0]));
    AlgebraElement v1 = conj(z);
    v1 *= 1.0 / std::sqrt(2.0 * (1.0 + s[0]));
    return {AlgebraElement::real(f, a), v1};
  }
  return raw_line(f, l, w / len);
}

ImmersedManifold veronese_manifold(Field f, int l) {
  check_field_size(f, l);
  const int k = veronese_param_dim(f, l);
  const int n = hermitian_dimension(f, l + 1);
  const int dim = field_dim(f) * l;
  const std::string name = "veronese-" + std::string(field_name(f)) + "P" + std::to_string(l);

  if (f == Field::O && l == 1) {
    // OP^1 is a round 8-sphere; the line chart (x, r) collapses r = 0 to a
    // point, so use the sphere chart instead.
    VectorXd offset = VectorXd::Zero(n);
    offset[0] = offset[1] = 0.5;
    MatrixXd lin = MatrixXd::Zero(n, k);
    lin(0, 0) = 0.5;
    lin(1, 0) = -0.5;
    for (int c = 0; c < 8; ++c) lin(2 + c, 1 + c) = std::sqrt(0.5);
    return normalized_linear_map(name, SpaceForm(0, n), dim, offset, lin);
  }

  // F(w) = q(w) / |w|^2 with q(w) = B(w, w) = sym(w, w) / 2.
  auto chart = [f, l](const VectorXd& w) {
    const Line v = raw_line(f, l, w);
    return VectorXd(0.5 * sym_coords(v, v) / w.squaredNorm());
  };
  ImmersedManifold m(name, SpaceForm(0, n), dim, ParameterDomain::homogeneous(k), chart);
  m.with_analytic(
      [f, l, k, n](const VectorXd& w) {
        const Line v = raw_line(f, l, w);
        const double s = w.squaredNorm();
        const VectorXd q = 0.5 * sym_coords(v, v);
        MatrixXd j(n, k);
        for (int i = 0; i < k; ++i) {
          const Line a = raw_line(f, l, VectorXd::Unit(k, i));
          j.col(i) = sym_coords(a, v) / s - q * (2.0 * w[i] / (s * s));
        }
        return j;
      },
      [f, l](const VectorXd& w, const VectorXd& dir) {
        const Line v = raw_line(f, l, w);
        const Line a = raw_line(f, l, dir);
        const double s = w.squaredNorm();
        const double wa = w.dot(dir);
        const VectorXd q = 0.5 * sym_coords(v, v);
        const VectorXd q1 = sym_coords(a, v);
        return VectorXd(sym_coords(a, a) / s - q1 * (4.0 * wa / (s * s)) - q * (2.0 * dir.squaredNorm() / (s * s)) +
                        q * (8.0 * wa * wa / (s * s * s)));
      });
  return m;
}

// ---------------------------------------------------------------------------

double VeroneseEmbedding::distance_factor() const {
  const double sphere_radius = std::sqrt(static_cast<double>(l) / (l + 1));
  switch (stage) {
    case VeroneseStage::matrix_space:
    case VeroneseStage::centered_slice: return scale;
    case VeroneseStage::great_sphere: return 1.0 / sphere_radius;
    case VeroneseStage::umbilical_sphere:
      return (target.kappa() == 1 ? std::sin(scale) : std::sinh(scale)) / sphere_radius;
  }
  return 1.0;
}

VectorXd VeroneseEmbedding::to_ambient(const FMatrix& p) const {
  if (p.field() != field || p.size() != l + 1) throw DomainError("matrix does not match the embedding");
  const VectorXd x = hermitian_coords(p);
  const int d = target.coord_dim();
  VectorXd y = VectorXd::Zero(d);
  const double sphere_radius = std::sqrt(static_cast<double>(l) / (l + 1));
  switch (stage) {
    case VeroneseStage::matrix_space: y.head(x.size()) = scale * x; break;
    case VeroneseStage::centered_slice: y = scale * (slice_map(field, l) * x); break;
    case VeroneseStage::great_sphere: {
      const VectorXd u = slice_map(field, l) * x / sphere_radius;
      y.head(u.size()) = u;
      break;
    }
    case VeroneseStage::umbilical_sphere: {
      const VectorXd u = slice_map(field, l) * x / sphere_radius;
      const bool sph = target.kappa() == 1;
      y[0] = sph ? std::cos(scale) : std::cosh(scale);
      y.segment(1, u.size()) = (sph ? std::sin(scale) : std::sinh(scale)) * u;
      break;
    }
  }
  return y;
}

FMatrix VeroneseEmbedding::from_ambient(const VectorXd& y) const {
  const int n = hermitian_dimension(field, l + 1);
  const double sphere_radius = std::sqrt(static_cast<double>(l) / (l + 1));
  VectorXd x;
  switch (stage) {
    case VeroneseStage::matrix_space: x = y.head(n) / scale; break;
    case VeroneseStage::centered_slice:
      x = slice_map(field, l).transpose() * (y / scale) + center_coords(field, l);
      break;
    case VeroneseStage::great_sphere:
      x = slice_map(field, l).transpose() * (sphere_radius * y.head(n - 1)) + center_coords(field, l);
      break;
    case VeroneseStage::umbilical_sphere: {
      const bool sph = target.kappa() == 1;
      const double radial = sph ? std::sin(scale) : std::sinh(scale);
      x = slice_map(field, l).transpose() * (sphere_radius / radial * y.segment(1, n - 1)) + center_coords(field, l);
      break;
    }
  }
  return from_hermitian_coords(field, l + 1, x);
}

IsometryCheck VeroneseEmbedding::certify_isometry(std::uint64_t seed, int pairs, double rel_tol) const {
  IsometryCheck out;
  out.pairs = pairs;
  Rng rng(seed);
  const double factor = distance_factor();
  for (int i = 0; i < pairs; ++i) {
    const ProjectivePoint p = projector_from_line(random_line(field, l, rng));
    const ProjectivePoint q = projector_from_line(random_line(field, l, rng));
    const double before = chordal_distance(p, q);
    const double after = (to_ambient(p.matrix()) - to_ambient(q.matrix())).norm();
    if (before < 1e-6) continue;
    out.max_relative_error = std::max(out.max_relative_error, std::abs(after / (factor * before) - 1.0));
  }
  out.passed = out.max_relative_error <= rel_tol;
  return out;
}

std::string VeroneseEmbedding::describe() const {
  const std::string base = std::string(field_name(field)) + "P" + std::to_string(l);
  switch (stage) {
    case VeroneseStage::matrix_space: return base + " -> Hermitian matrices (scale " + std::to_string(scale) + ")";
    case VeroneseStage::centered_slice: return base + " -> trace-zero slice (scale " + std::to_string(scale) + ")";
    case VeroneseStage::great_sphere: return base + " -> unit sphere -> totally geodesic in " + target.describe();
    case VeroneseStage::umbilical_sphere:
      return base + " -> unit sphere -> umbilical sphere of radius " + std::to_string(scale) + " in " +
             target.describe();
  }
  return base;
}

VeroneseInto veronese_into(Field f, int l, SpaceForm target, double scale) {
  check_field_size(f, l);
  if (!(scale > 0.0)) throw DomainError("veronese_into: scale must be positive");
  const int n = hermitian_dimension(f, l + 1);
  const int cd = target.coord_dim();
  VeroneseStage stage;
  if (target.kappa() == 0) {
    if (cd >= n) {
      stage = VeroneseStage::matrix_space;
    } else if (cd == n - 1) {
      stage = VeroneseStage::centered_slice;
    } else {
      throw DomainError("veronese_into: " + target.describe() + " is too small; need dimension >= " +
                        std::to_string(n - 1));
    }
  } else if (target.kappa() == 1 && std::abs(scale - std::numbers::pi / 2) < 1e-12) {
    if (cd < n - 1) throw DomainError("veronese_into: target sphere too small; need S^" + std::to_string(n - 2));
    stage = VeroneseStage::great_sphere;
  } else {
    if (target.kappa() == 1 && scale > std::numbers::pi / 2) {
      throw DomainError("veronese_into: spherical host radius must not exceed pi/2");
    }
    if (cd < n) throw DomainError("veronese_into: target too small; need dimension >= " + std::to_string(n - 1));
    stage = VeroneseStage::umbilical_sphere;
  }

  VeroneseEmbedding emb{f, l, target, scale, stage};
  // The composition is affine in the matrix coordinates: y = A x + b.
  const MatrixXd s = slice_map(f, l);
  const double sphere_radius = std::sqrt(static_cast<double>(l) / (l + 1));
  MatrixXd a = MatrixXd::Zero(cd, n);
  VectorXd b = VectorXd::Zero(cd);
  switch (stage) {
    case VeroneseStage::matrix_space: a.topRows(n) = scale * MatrixXd::Identity(n, n); break;
    case VeroneseStage::centered_slice: a = scale * s; break;
    case VeroneseStage::great_sphere: a.topRows(n - 1) = s / sphere_radius; break;
    case VeroneseStage::umbilical_sphere: {
      const bool sph = target.kappa() == 1;
      b[0] = sph ? std::cos(scale) : std::cosh(scale);
      a.middleRows(1, n - 1) = (sph ? std::sin(scale) : std::sinh(scale)) / sphere_radius * s;
      break;
    }
  }
  // The slice map kills the trace direction, so no constant term is needed
  // for the centered stages.
  ImmersedManifold base = veronese_manifold(f, l);
  ImmersedManifold m = affine_image(base, base.name() + "-in-" + target.describe(), target, a, b);
  return {emb, std::move(m)};
}

}  // namespace focalkit
