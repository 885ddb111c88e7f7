#include "romslab/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "romslab/error.hpp"

namespace romslab {

GaussRule gauss_legendre(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidRule, "Gauss rule needs at least one node");
  GaussRule rule;
  rule.nodes.assign(k, 0.0);
  rule.weights.assign(k, 0.0);
  const double n = static_cast<double>(k);
  for (std::size_t i = 0; i < (k + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= k; ++j) {
        const double jj = static_cast<double>(j);
        const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t j = 2; j <= k; ++j) {
      const double jj = static_cast<double>(j);
      const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[k - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (k % 2 == 1) rule.nodes[k / 2] = 0.0;
  return rule;
}

}  // namespace romslab
