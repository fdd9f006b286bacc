#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace focalkit {

using Rng = std::mt19937_64;

// splitmix64 mix of (seed, stream): per-sample sub-seeds that do not depend
// on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Eigen::VectorXd gaussian_vector(Rng& rng, int n);
Eigen::VectorXd random_unit_vector(Rng& rng, int n);

// Radical inverse of index in the given prime base.
double halton(std::uint64_t index, int base);

// Deterministic directions on S^{m-1}: the signed coordinate axes, then
// Halton points pushed through Box-Muller and normalized.
std::vector<Eigen::VectorXd> low_discrepancy_directions(int m, int count);

}  // namespace focalkit
