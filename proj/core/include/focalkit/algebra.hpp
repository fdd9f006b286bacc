#pragma once

// Normed division algebras R, C, H, O built by Cayley-Dickson doubling, and
// square matrices over them.
//
// Doubling convention, applied recursively on coordinate halves:
//
//   (a, b) * (c, d) = (a c - conj(d) b,  d a + b conj(c))
//
// With this table C has i*i = -1, H has i*j = k and j*i = -k, and O is
// alternative but not associative.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace focalkit {

enum class Field : std::uint8_t { R, C, H, O };

constexpr int field_dim(Field f) {
  switch (f) {
    case Field::R: return 1;
    case Field::C: return 2;
    case Field::H: return 4;
    case Field::O: return 8;
  }
  return 0;
}

constexpr bool is_associative(Field f) { return f != Field::O; }

std::string_view field_name(Field f);
Field parse_field(std::string_view name);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(Field f) : field_(f) {}
  AlgebraElement(Field f, std::span<const double> coords);

  static AlgebraElement real(Field f, double x);
  // Standard basis element e_index; e_0 = 1.
  static AlgebraElement unit(Field f, int index);

  Field field() const { return field_; }
  int dim() const { return field_dim(field_); }

  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim())}; }
  double real_part() const { return c_[0]; }

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(double s);

 private:
  Field field_ = Field::R;
  std::array<double, 8> c_{};
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a);
AlgebraElement operator*(double s, AlgebraElement a);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

// Throws DomainError when the operands live in different algebras.
AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement conj(const AlgebraElement& a);
double norm(const AlgebraElement& a);
double norm2(const AlgebraElement& a);
// Real part of a * conj(b), i.e. the Euclidean dot product of coordinates.
double real_dot(const AlgebraElement& a, const AlgebraElement& b);
double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);

// Real matrix of x -> a * x in the coordinate basis.
Eigen::MatrixXd left_mul_matrix(const AlgebraElement& a);

// Square matrix over R, C, H or O. Octonionic matrices are capped at 3x3.
class FMatrix {
 public:
  FMatrix(Field f, int size);

  static FMatrix identity(Field f, int size);
  // Matrix unit E_ij (zero-based).
  static FMatrix unit(Field f, int size, int i, int j);

  Field field() const { return field_; }
  int size() const { return size_; }

  const AlgebraElement& operator()(int i, int j) const { return entries_[index(i, j)]; }
  AlgebraElement& operator()(int i, int j) { return entries_[index(i, j)]; }

  FMatrix conj_transpose() const;
  // Sum of the real parts of the diagonal.
  double real_trace() const;
  // max_ij |M_ij - conj(M_ji)|, coordinatewise.
  double hermitian_residual() const;

  FMatrix& operator+=(const FMatrix& o);
  FMatrix& operator-=(const FMatrix& o);
  FMatrix& operator*=(double s);

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * size_ + j); }

  Field field_;
  int size_;
  std::vector<AlgebraElement> entries_;
};

FMatrix operator+(FMatrix a, const FMatrix& b);
FMatrix operator-(FMatrix a, const FMatrix& b);
FMatrix operator*(double s, FMatrix a);
// Ordinary matrix product (entrywise sums of algebra products).
FMatrix operator*(const FMatrix& a, const FMatrix& b);

// 1/2 tr(M1 conj(M2)^t + M2 conj(M1)^t).
double mat_inner(const FMatrix& m1, const FMatrix& m2);
double max_abs_diff(const FMatrix& a, const FMatrix& b);

// 1/2 (M N + N M).
FMatrix jordan_product(const FMatrix& m, const FMatrix& n);
// Jordan square of a Hermitian matrix; throws DomainError otherwise.
FMatrix jordan_square(const FMatrix& m, double hermitian_tol = 1e-10);

// Block matrix of left multiplications, (size*d) x (size*d).
Eigen::MatrixXd real_representation(const FMatrix& m);

// Orthonormal coordinates (for mat_inner) on the Hermitian matrices:
// diagonal entries first, then sqrt(2) * coords(M_ij) for i < j.
int hermitian_dimension(Field f, int size);
Eigen::VectorXd hermitian_coords(const FMatrix& m);
FMatrix from_hermitian_coords(Field f, int size, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace focalkit
