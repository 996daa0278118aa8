#pragma once

#include <vector>

namespace quadsym {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order on [-1, 1].
QuadratureRule gauss_legendre(int order);

}  // namespace quadsym
