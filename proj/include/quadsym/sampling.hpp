#pragma once

#include "quadsym/types.hpp"

#include <cstdint>
#include <random>

namespace quadsym {

/// Deterministic uniform sampler on the unit sphere of a subspace.
class SphereSampler {
 public:
  explicit SphereSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform point on the unit sphere of R^dim.
  Vec unit(int dim) {
    Vec v(dim);
    do {
      for (int i = 0; i < dim; ++i) v(i) = normal_(rng_);
    } while (v.norm() == 0.0);
    return v / v.norm();
  }

  /// Uniform point on the unit sphere of span(basis), basis columns orthonormal.
  Vec unit_in(const Mat& basis) { return basis * unit(static_cast<int>(basis.cols())); }

  double gaussian() { return normal_(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace quadsym
