#include "focalkit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "focalkit/error.hpp"

namespace focalkit {

namespace {

// out = x * y for Cayley-Dickson elements of dimension n (a power of two).
void cd_mul(const double* x, const double* y, int n, double* out) {
  if (n == 1) {
    out[0] = x[0] * y[0];
    return;
  }
  const int h = n / 2;
  const double* a = x;
  const double* b = x + h;
  const double* c = y;
  const double* d = y + h;

  std::array<double, 4> dbar{}, cbar{}, t1{}, t2{};
  for (int i = 0; i < h; ++i) {
    dbar[i] = i == 0 ? d[0] : -d[i];
    cbar[i] = i == 0 ? c[0] : -c[i];
  }
  // first half: a c - conj(d) b
  cd_mul(a, c, h, t1.data());
  cd_mul(dbar.data(), b, h, t2.data());
  for (int i = 0; i < h; ++i) out[i] = t1[i] - t2[i];
  // second half: d a + b conj(c)
  cd_mul(d, a, h, t1.data());
  cd_mul(b, cbar.data(), h, t2.data());
  for (int i = 0; i < h; ++i) out[h + i] = t1[i] + t2[i];
}

void require_same(Field a, Field b) {
  if (a != b) {
    throw DomainError("algebra mismatch: " + std::string(field_name(a)) + " vs " +
                      std::string(field_name(b)));
  }
}

}  // namespace

std::string_view field_name(Field f) {
  switch (f) {
    case Field::R: return "R";
    case Field::C: return "C";
    case Field::H: return "H";
    case Field::O: return "O";
  }
  return "?";
}

Field parse_field(std::string_view name) {
  if (name == "R") return Field::R;
  if (name == "C") return Field::C;
  if (name == "H") return Field::H;
  if (name == "O") return Field::O;
  throw DomainError("unknown field tag '" + std::string(name) + "' (expected R, C, H or O)");
}

AlgebraElement::AlgebraElement(Field f, std::span<const double> coords) : field_(f) {
  if (static_cast<int>(coords.size()) != field_dim(f)) {
    throw DomainError("coordinate count " + std::to_string(coords.size()) + " does not match " +
                      std::string(field_name(f)));
  }
  std::copy(coords.begin(), coords.end(), c_.begin());
}

AlgebraElement AlgebraElement::real(Field f, double x) {
  AlgebraElement a(f);
  a.c_[0] = x;
  return a;
}

AlgebraElement AlgebraElement::unit(Field f, int index) {
  if (index < 0 || index >= field_dim(f)) throw DomainError("basis index out of range");
  AlgebraElement a(f);
  a.c_[static_cast<std::size_t>(index)] = 1.0;
  return a;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same(field_, o.field_);
  for (int i = 0; i < dim(); ++i) c_[i] += o.c_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same(field_, o.field_);
  for (int i = 0; i < dim(); ++i) c_[i] -= o.c_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double s) {
  for (int i = 0; i < dim(); ++i) c_[i] *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }
AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return alg_mul(a, b); }

AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.field(), b.field());
  std::array<double, 8> x{}, y{}, out{};
  for (int i = 0; i < a.dim(); ++i) {
    x[i] = a[i];
    y[i] = b[i];
  }
  cd_mul(x.data(), y.data(), a.dim(), out.data());
  return AlgebraElement(a.field(), std::span<const double>(out.data(), a.dim()));
}

AlgebraElement conj(const AlgebraElement& a) {
  AlgebraElement r = a;
  for (int i = 1; i < a.dim(); ++i) r[i] = -a[i];
  return r;
}

double norm2(const AlgebraElement& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * a[i];
  return s;
}

double norm(const AlgebraElement& a) { return std::sqrt(norm2(a)); }

double real_dot(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.field(), b.field());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.field(), b.field());
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Eigen::MatrixXd left_mul_matrix(const AlgebraElement& a) {
  const int d = a.dim();
  Eigen::MatrixXd l(d, d);
  for (int j = 0; j < d; ++j) {
    const AlgebraElement col = alg_mul(a, AlgebraElement::unit(a.field(), j));
    for (int i = 0; i < d; ++i) l(i, j) = col[i];
  }
  return l;
}

// ---------------------------------------------------------------------------

FMatrix::FMatrix(Field f, int size) : field_(f), size_(size) {
  if (size < 1) throw DomainError("matrix size must be positive");
  if (f == Field::O && size > 3) {
    throw DomainError("octonionic matrices are limited to 3x3 (size " + std::to_string(size) + ")");
  }
  entries_.assign(static_cast<std::size_t>(size * size), AlgebraElement(f));
}

FMatrix FMatrix::identity(Field f, int size) {
  FMatrix m(f, size);
  for (int i = 0; i < size; ++i) m(i, i) = AlgebraElement::real(f, 1.0);
  return m;
}

FMatrix FMatrix::unit(Field f, int size, int i, int j) {
  FMatrix m(f, size);
  if (i < 0 || j < 0 || i >= size || j >= size) throw DomainError("matrix unit index out of range");
  m(i, j) = AlgebraElement::real(f, 1.0);
  return m;
}

FMatrix FMatrix::conj_transpose() const {
  FMatrix r(field_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) r(i, j) = conj((*this)(j, i));
  return r;
}

double FMatrix::real_trace() const {
  double t = 0.0;
  for (int i = 0; i < size_; ++i) t += (*this)(i, i).real_part();
  return t;
}

double FMatrix::hermitian_residual() const {
  double r = 0.0;
  for (int i = 0; i < size_; ++i)
    for (int j = i; j < size_; ++j) r = std::max(r, max_abs_diff((*this)(i, j), conj((*this)(j, i))));
  return r;
}

FMatrix& FMatrix::operator+=(const FMatrix& o) {
  if (o.field_ != field_ || o.size_ != size_) throw DomainError("matrix shape mismatch in +");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

FMatrix& FMatrix::operator-=(const FMatrix& o) {
  if (o.field_ != field_ || o.size_ != size_) throw DomainError("matrix shape mismatch in -");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

FMatrix& FMatrix::operator*=(double s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

FMatrix operator+(FMatrix a, const FMatrix& b) { return a += b; }
FMatrix operator-(FMatrix a, const FMatrix& b) { return a -= b; }
FMatrix operator*(double s, FMatrix a) { return a *= s; }

FMatrix operator*(const FMatrix& a, const FMatrix& b) {
  if (a.field() != b.field() || a.size() != b.size()) throw DomainError("matrix shape mismatch in *");
  const int n = a.size();
  FMatrix r(a.field(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      AlgebraElement s(a.field());
      for (int k = 0; k < n; ++k) s += alg_mul(a(i, k), b(k, j));
      r(i, j) = s;
    }
  return r;
}

double mat_inner(const FMatrix& m1, const FMatrix& m2) {
  if (m1.field() != m2.field() || m1.size() != m2.size()) {
    throw DomainError("mat_inner: shape mismatch");
  }
  const FMatrix a = m1 * m2.conj_transpose();
  const FMatrix b = m2 * m1.conj_transpose();
  // The imaginary parts of the two traces cancel; only the real part survives.
  return 0.5 * (a.real_trace() + b.real_trace());
}

double max_abs_diff(const FMatrix& a, const FMatrix& b) {
  if (a.field() != b.field() || a.size() != b.size()) throw DomainError("matrix shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) m = std::max(m, max_abs_diff(a(i, j), b(i, j)));
  return m;
}

FMatrix jordan_product(const FMatrix& m, const FMatrix& n) {
  FMatrix r = m * n;
  r += n * m;
  r *= 0.5;
  return r;
}

FMatrix jordan_square(const FMatrix& m, double hermitian_tol) {
  const double res = m.hermitian_residual();
  if (res > hermitian_tol) {
    throw DomainError("jordan_square: matrix is not Hermitian (residual " + std::to_string(res) + ")");
  }
  return jordan_product(m, m);
}

Eigen::MatrixXd real_representation(const FMatrix& m) {
  const int d = field_dim(m.field());
  const int n = m.size();
  Eigen::MatrixXd r(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.block(i * d, j * d, d, d) = left_mul_matrix(m(i, j));
  return r;
}

int hermitian_dimension(Field f, int size) { return size + field_dim(f) * size * (size - 1) / 2; }

Eigen::VectorXd hermitian_coords(const FMatrix& m) {
  const int n = m.size();
  const int d = field_dim(m.field());
  Eigen::VectorXd x(hermitian_dimension(m.field(), n));
  int k = 0;
  for (int i = 0; i < n; ++i) x[k++] = m(i, i).real_part();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int c = 0; c < d; ++c) x[k++] = std::sqrt(2.0) * m(i, j)[c];
  return x;
}

FMatrix from_hermitian_coords(Field f, int size, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != hermitian_dimension(f, size)) throw DomainError("hermitian coordinate length mismatch");
  const int d = field_dim(f);
  FMatrix m(f, size);
  int k = 0;
  for (int i = 0; i < size; ++i) m(i, i) = AlgebraElement::real(f, x[k++]);
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) {
      AlgebraElement a(f);
      for (int c = 0; c < d; ++c) a[c] = x[k++] / std::sqrt(2.0);
      m(i, j) = a;
      m(j, i) = conj(a);
    }
  return m;
}

}  // namespace focalkit
