#pragma once

// Projective spaces FP^l as rank-one Hermitian idempotents of trace one in
// the Hermitian (l+1)x(l+1) matrices over F, with the real inner product
// of algebra.hpp. They sit on the sphere of radius sqrt(l/(l+1)) about
// Id/(l+1) in the trace-one slice.
//
// Octonionic lines are handled through chart representatives with one real
// coordinate; any two octonions generate an associative subalgebra, so
// the products v_i conj(v_j) and the idempotency check are unambiguous.

#include <cstdint>
#include <string>
#include <vector>

#include "focalkit/algebra.hpp"
#include "focalkit/immersion.hpp"
#include "focalkit/sampling.hpp"
#include "focalkit/spaceform.hpp"

namespace focalkit {

using Line = std::vector<AlgebraElement>;

class ProjectivePoint {
 public:
  Field field() const { return matrix_.field(); }
  int l() const { return matrix_.size() - 1; }
  const FMatrix& matrix() const { return matrix_; }

 private:
  friend ProjectivePoint projector_from_line(const Line& v);
  explicit ProjectivePoint(FMatrix m) : matrix_(std::move(m)) {}
  FMatrix matrix_;
};

// P_ij = v_i conj(v_j). Throws DomainError for a non-unit v and ChartError
// for an octonionic v without a real coordinate.
ProjectivePoint projector_from_line(const Line& v);

// Right-multiplies v by a unit element so that its largest coordinate
// becomes real and positive. For associative F and for OP^1 the line is
// unchanged; for OP^2 this picks a chart representative.
Line canonicalize_line(const Line& v);

// Gaussian chart parameters pushed through line_from_params.
Line random_line(Field f, int l, Rng& rng);

struct PointCertificate {
  double hermitian_residual = 0.0;
  double idempotency_residual = 0.0;
  double trace_residual = 0.0;
  // Associative F: singular value dim(F)+1 of the real representation.
  // O: max |M_ij M_jk - M_jj M_ik| (the real representation of an
  // octonionic projector is not of rank 8).
  double rank_residual = 0.0;
  double real_rank_residual = 0.0;
  int field_rank = 0;
  double sphere_residual = 0.0;
  double tolerance = 0.0;

  bool hermitian_ok = false;
  bool idempotent_ok = false;
  bool trace_ok = false;
  bool rank_ok = false;
  bool sphere_ok = false;
  bool passed() const { return hermitian_ok && idempotent_ok && trace_ok && rank_ok && sphere_ok; }
};

PointCertificate certify_point(const FMatrix& m, double tol = 1e-9);

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

// Parameter layout of the Veronese charts: d(l+1) reals for associative F
// (the line vector), 17 for OP^2 (two octonions, then one real
// coordinate), and 9 for OP^1, read as (t, z) on S^8 for the point
// (1/2) [[1 + t, z], [conj z, 1 - t]].
int veronese_param_dim(Field f, int l);
Line line_from_params(Field f, int l, const VectorXd& w);

// FP^l in the flat space of Hermitian matrices (orthonormal coordinates),
// with analytic chart derivatives.
ImmersedManifold veronese_manifold(Field f, int l);

enum class VeroneseStage { matrix_space, centered_slice, great_sphere, umbilical_sphere };

struct IsometryCheck {
  int pairs = 0;
  double max_relative_error = 0.0;
  bool passed = false;
};

// Composition: matrix space -> (center, rescale to the unit sphere) ->
// totally geodesic or umbilical inclusion into the target.
struct VeroneseEmbedding {
  Field field;
  int l;
  SpaceForm target;
  double scale;
  VeroneseStage stage;

  // Ratio of Euclidean coordinate distances after/before the map.
  double distance_factor() const;
  VectorXd to_ambient(const FMatrix& p) const;
  FMatrix from_ambient(const VectorXd& x) const;
  IsometryCheck certify_isometry(std::uint64_t seed, int pairs = 200, double rel_tol = 1e-9) const;
  std::string describe() const;
};

struct VeroneseInto {
  VeroneseEmbedding embedding;
  ImmersedManifold manifold;
};

// kappa = 0: scale multiplies matrix-space distances (n >= N keeps the
// full matrix coordinates, n = N - 1 uses the centered slice).
// kappa = +-1: scale is the intrinsic radius of the host sphere
// (scale = pi/2 for kappa = +1 is the totally geodesic inclusion).
VeroneseInto veronese_into(Field f, int l, SpaceForm target, double scale);

}  // namespace focalkit
