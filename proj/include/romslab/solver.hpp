#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "romslab/angular.hpp"
#include "romslab/medium.hpp"
#include "romslab/sweep.hpp"

namespace romslab {

struct SolveOptions {
  double tol = 1e-10;  // bound on the distance to the discrete fixed point
  std::size_t max_iter = 10000;
  unsigned jobs = 1;
  /// Called with (k, phi^k) after every update; k starts at 1.
  std::function<void(std::size_t, const ScalarFlux&)> on_iterate;
};

struct SolveReport {
  std::size_t iterations = 0;
  double final_residual = 0.0;  // L2(sigma_t) norm of phi^{k+1} - phi^k
  bool converged = false;
  double contraction_estimate = 0.0;  // geometric mean residual ratio, trailing 5 steps
  double stopping_threshold = 0.0;
  std::vector<double> residuals;
};

struct SolveResult {
  ScalarFlux phi;
  SolveReport report;
};

/// Scattering plus external source sigma_s phi + q (equal to lambda sigma_r phi + q).
std::vector<double> total_source(const MediumProfile& medium, const ScalarFlux& phi);

/// sum_l w_l * (cell averages of the sweep along mu_l with the given source
/// and the boundary inflow). Reduction runs in ordinate order.
ScalarFlux average_sweep(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad,
                         std::span<const double> source, unsigned jobs = 1);

/// Source iteration phi^{k+1} = sum_l w_l sweep_l(sigma_s phi^k + q) from
/// phi^0 = 0. Stops once the step falls below tol (1 - l)/l with
/// l = max(lambda, 0.1), which bounds the distance to the fixed point by tol.
/// Hitting max_iter returns the last iterate with converged = false.
SolveResult solve(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad,
                  const SolveOptions& options = {});

/// Per-ordinate fluxes for the frozen source sigma_s phi + q.
std::vector<AngularFlux> angular_fluxes(const MediumProfile& medium, const BoundarySpec& boundary,
                                        const QuadratureSet& quad, const ScalarFlux& phi);

struct NeumannSum {
  ScalarFlux phi;          // sum_{p <= P} lambda^p phi^(p)
  double first_term_norm;  // ||phi^(0)||
};

/// Truncated operator series phi^(0) = T(q/sigma_r) + mean b_mu,
/// phi^(p) = T phi^(p-1), built from apply_A and boundary_term. Needs lambda > 0
/// and sigma_r > 0 wherever q > 0.
NeumannSum neumann_partial_sum(const MediumProfile& medium, const BoundarySpec& boundary,
                               const QuadratureSet& quad, std::size_t terms);

}  // namespace romslab
