#pragma once

#include <cstddef>
#include <vector>

namespace romslab {

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// k-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_k).
GaussRule gauss_legendre(std::size_t k);

}  // namespace romslab
