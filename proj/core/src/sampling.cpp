#include "focalkit/sampling.hpp"

#include <cmath>
#include <numbers>

namespace focalkit {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Eigen::VectorXd gaussian_vector(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd random_unit_vector(Rng& rng, int n) {
  for (;;) {
    Eigen::VectorXd v = gaussian_vector(rng, n);
    const double len = v.norm();
    if (len > 1e-12) return v / len;
  }
}

double halton(std::uint64_t index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

std::vector<Eigen::VectorXd> low_discrepancy_directions(int m, int count) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < m && static_cast<int>(dirs.size()) < count; ++i) {
    dirs.push_back(Eigen::VectorXd::Unit(m, i));
    if (static_cast<int>(dirs.size()) < count) dirs.push_back(-Eigen::VectorXd::Unit(m, i));
  }
  // Box-Muller needs an even number of uniform coordinates.
  const int pairs = (m + 1) / 2;
  std::uint64_t index = 1;
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd v(2 * pairs);
    for (int p = 0; p < pairs; ++p) {
      const double u1 = std::max(halton(index, kPrimes[(2 * p) % 32]), 1e-12);
      const double u2 = halton(index, kPrimes[(2 * p + 1) % 32]);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      v[2 * p] = rad * std::cos(2.0 * std::numbers::pi * u2);
      v[2 * p + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    ++index;
    Eigen::VectorXd d = v.head(m);
    const double len = d.norm();
    if (len > 1e-9) dirs.push_back(d / len);
  }
  return dirs;
}

}  // namespace focalkit
