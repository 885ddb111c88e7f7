#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romslab/angular.hpp"
#include "romslab/medium.hpp"
#include "romslab/solver.hpp"

namespace romslab {

struct ErrorRow {
  std::size_t n = 0;
  double estimate = 0.0;
  double se = 0.0;  // 0 for deterministic rows
  std::size_t samples = 0;
  bool flagged = false;  // excluded from slope fits
  double wall_time = 0.0;
  double noise_floor = 0.0;  // bias rows only: expected norm of the pure sampling noise
};

struct ErrorTable {
  std::string label;
  std::vector<ErrorRow> rows;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// OLS on (log n, log estimate) over unflagged rows. Throws TooFewPoints
/// with fewer than three.
SlopeFit fit_slope(const ErrorTable& table);

struct StudyConfig {
  MediumProfile medium = make_uniform_medium(0.0, 1.0, 200, 1.0, 0.5, 0.0);
  BoundarySpec boundary{ConstantInflow{1.0}, ConstantInflow{0.0}};
  double delta = 0.001;
  PartitionLayout layout = PartitionLayout::uniform();
  std::vector<std::size_t> n_list{8, 16, 32, 64, 128};
  std::size_t samples = 64;
  std::uint64_t master_seed = 20240917;
  double tol = 1e-10;
  std::size_t max_iter = 10000;

  // Reference quadrature: Gauss points per half, doubled from ref_order
  // until successive solutions differ by at most ref_tol.
  std::size_t ref_order = 64;
  std::size_t ref_max_order = 16384;
  double ref_tol = 1e-8;

  // Bias study: images per draw are 2 * image_shifts; groups of images are
  // doubled from bias_groups until the row is resolved or the solve budget
  // is spent.
  std::size_t image_shifts = 8;
  std::size_t bias_groups = 64;
  std::size_t max_solves = 20000;

  unsigned jobs = 1;

  /// Solver tolerance bound tied to the finest partition: 1e-3 n_max^{-3}.
  double tol_limit() const;
  /// Throws Config when an invariant is violated (n parity and order,
  /// sample counts, tolerance rule, delta range).
  void validate() const;
  SolveOptions solve_options() const;
};

struct ReferenceSolution {
  ScalarFlux phi;
  std::size_t order = 0;     // Gauss points per half of the accepted rule
  double certificate = 0.0;  // ||phi_N - phi_2N|| at acceptance
  SolveReport report;
};

/// Solution with the reference Gauss rule on S^delta; throws
/// ReferenceNotConverged past ref_max_order.
ReferenceSolution reference_solution(const StudyConfig& config);

/// Mean over samples of ||phi^xi - phi_ref|| per n, with its standard error.
ErrorTable single_run_error_study(const StudyConfig& config, const ReferenceSolution& ref);
ErrorTable single_run_error_study(const StudyConfig& config);

/// ||mean phi^xi - phi_ref|| per n. Each draw is averaged over its image
/// group (shift lattice and reflection of the in-cell uniforms), which keeps
/// the mean unbiased while cancelling most of the sampling noise. The SE is a
/// jackknife over groups; rows whose SE or noise floor exceed estimate/5
/// after the solve budget is spent are flagged.
ErrorTable bias_study(const StudyConfig& config, const ReferenceSolution& ref);
ErrorTable bias_study(const StudyConfig& config);

/// Deterministic ||phi_DOM(n) - phi_ref||; Gauss uses n/2 points per half.
ErrorTable dom_error_study(const StudyConfig& config, DomRule::Kind rule, const ReferenceSolution& ref);
ErrorTable dom_error_study(const StudyConfig& config, DomRule::Kind rule);

struct RegularizationRow {
  double delta = 0.0;
  double error = 0.0;        // ||phi_ref - phi^delta||
  double consistency = 0.0;  // ||f||, f = I^delta(psi_ref) - I^{ref}(psi_ref)
  double bound = 0.0;        // ||f|| / (1 - lambda) + tolerance
  bool holds = false;
  std::size_t order = 0;
};

struct RegularizationTable {
  double reference_delta = 0.0;
  double tolerance = 0.0;  // reference certificate plus solver tolerances
  std::vector<RegularizationRow> rows;
};

/// Truncation error of phi^delta against a reference model at
/// reference_delta, with the consistency bound ||f|| / (1 - lambda).
RegularizationTable regularization_study(const StudyConfig& config, const std::vector<double>& deltas,
                                         double reference_delta);

}  // namespace romslab
