#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>

#include "romslab/angular.hpp"
#include "romslab/medium.hpp"

namespace romslab {

/// Matrix acting on cell-average vectors, paired with the cell weights
/// sigma_t h that define the L2(sigma_t) inner product <f,g> = sum f g w.
struct DenseOperator {
  Eigen::MatrixXd entries;
  Eigen::VectorXd weight;
  std::string label;

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries.rows()); }

  /// D^{1/2} A D^{-1/2}: the same operator in the Euclidean frame.
  Eigen::MatrixXd euclidean_frame() const;

  /// Weighted adjoint D^{-1} A^T D.
  Eigen::MatrixXd adjoint() const;
};

/// Column j is apply_A(medium, mu, e_j).
DenseOperator assemble_A(const MediumProfile& medium, double mu);

/// sum_l w_l assemble_A(medium, mu_l).
DenseOperator assemble_T(const MediumProfile& medium, const QuadratureSet& quad);

struct ReferenceOperator {
  DenseOperator op;
  std::size_t order = 0;         // Gauss points per half
  double last_change = 0.0;      // max entry change at the final doubling
};

/// Velocity average of A_mu over S^delta from composite Gauss rules, doubling
/// the order from `start_order` until the largest entry change is below
/// `entry_tol`. Throws ReferenceNotConverged past `max_order`.
ReferenceOperator reference_T(const MediumProfile& medium, double delta, std::size_t start_order = 256,
                              double entry_tol = 1e-11, std::size_t max_order = 8192);

struct NormOptions {
  double rel_tol = 1e-10;
  std::size_t max_iter = 200000;
};

/// Largest singular value of D^{1/2} A D^{-1/2}, i.e. the L2(sigma_t)
/// operator norm, by power iteration on the Gram matrix from a fixed start
/// vector. Throws NoConvergence after max_iter.
double weighted_norm(const DenseOperator& op, const NormOptions& options = {});

/// trace(A* A) = squared weighted Hilbert-Schmidt norm.
double trace_AstarA(const DenseOperator& op);
/// trace(A A*), accumulated through the other product order.
double trace_AAstar(const DenseOperator& op);

double trace_AstarA(const MediumProfile& medium, double mu);

/// (1/|mu|) |x_R - x_L| max(sigma_t)^2 max(1/sigma_t).
double trace_bound(const MediumProfile& medium, double mu);

struct DeltaStats {
  std::size_t n = 0;
  std::size_t samples = 0;
  double mean_norm = 0.0;
  double se_mean_norm = 0.0;
  double mean_sq_norm = 0.0;
  double se_mean_sq = 0.0;
  double max_norm = 0.0;
  Eigen::VectorXd mean_delta;  // entrywise sample mean (column-major for operators)
  Eigen::VectorXd se_delta;    // entrywise standard error
};

/// Statistics of ||T^xi - T_ref|| over ROM samples 0..sample_count-1.
DeltaStats delta_T_stats(const MediumProfile& medium, const VelocityPartition& partition,
                         std::uint64_t master_seed, std::size_t sample_count, const DenseOperator& t_ref,
                         unsigned jobs = 1);

DeltaStats delta_T_stats(const MediumProfile& medium, const VelocityPartition& partition,
                         std::uint64_t master_seed, std::size_t sample_count, std::size_t ref_order,
                         unsigned jobs = 1);

/// sum_l w_l b_{mu_l}: the quadrature average of the boundary propagator.
ScalarFlux average_boundary_term(const MediumProfile& medium, const BoundarySpec& boundary,
                                 const QuadratureSet& quad);

struct ReferenceBoundary {
  ScalarFlux b;
  std::size_t order = 0;
  double last_change = 0.0;
};

ReferenceBoundary reference_boundary_term(const MediumProfile& medium, const BoundarySpec& boundary, double delta,
                                          std::size_t start_order = 256, double entry_tol = 1e-12,
                                          std::size_t max_order = 8192);

/// Statistics of the L2(sigma_t) norm of delta b = sum_l w_l b_{mu_l} - b_ref.
DeltaStats delta_b_stats(const MediumProfile& medium, const BoundarySpec& boundary,
                         const VelocityPartition& partition, std::uint64_t master_seed, std::size_t sample_count,
                         const ScalarFlux& b_ref, unsigned jobs = 1);

DeltaStats delta_b_stats(const MediumProfile& medium, const BoundarySpec& boundary,
                         const VelocityPartition& partition, std::uint64_t master_seed, std::size_t sample_count,
                         std::size_t ref_order = 256, unsigned jobs = 1);

}  // namespace romslab
