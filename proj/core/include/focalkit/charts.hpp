#pragma once

// Built-in immersions with analytic chart derivatives.

#include <vector>

#include "focalkit/immersion.hpp"

namespace focalkit {

// F(w) = offset + linear * (w / |w|) on the homogeneous domain R^k.
ImmersedManifold normalized_linear_map(std::string name, SpaceForm ambient, int dim, VectorXd offset,
                                       MatrixXd linear);

// Standard totally umbilical m-sphere in M^n(kappa): Euclidean radius rho
// about the origin (kappa = 0), or intrinsic radius rho about the base
// point (kappa = +-1; rho <= pi/2 for the sphere).
ImmersedManifold umbilical_sphere(int kappa, int n, int m, double rho);

// Ellipsoid sum (x_i / a_i)^2 = 1 in R^n, n >= axes.size().
ImmersedManifold ellipsoid(const std::vector<double>& axes, int n);

// The flat 2-torus: phi(x, y, z) = (cos sqrt3 x, sin sqrt3 x, ...) / sqrt3
// restricted to the plane x + y + z = 0, parametrized by the period
// lattice of that plane so that (s, t) in [0,1)^2 covers it once.
ImmersedManifold clifford_torus_example();

// A * F + b for a base immersion, landing in `target` (rows of A must
// match target.coord_dim()). Analytic derivatives carry over.
ImmersedManifold affine_image(const ImmersedManifold& base, std::string name, SpaceForm target, MatrixXd a,
                              VectorXd b);

// Periodic tabulated immersion on [0,1)^m: values has one row per grid node
// (last axis fastest) and one column per model coordinate. Evaluated by
// tensor-product trigonometric interpolation, then retracted onto the
// model.
ImmersedManifold tabulated_periodic(std::string name, SpaceForm ambient, std::vector<int> shape, MatrixXd values);

}  // namespace focalkit
