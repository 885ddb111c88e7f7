#include "romslab/operator_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "romslab/error.hpp"
#include "romslab/parallel.hpp"
#include "romslab/sweep.hpp"

namespace romslab {

Eigen::MatrixXd DenseOperator::euclidean_frame() const {
  const Eigen::VectorXd s = weight.cwiseSqrt();
  return s.asDiagonal() * entries * s.cwiseInverse().asDiagonal();
}

Eigen::MatrixXd DenseOperator::adjoint() const {
  return weight.cwiseInverse().asDiagonal() * entries.transpose() * weight.asDiagonal();
}

namespace {

Eigen::VectorXd weights_of(const MediumProfile& medium) {
  const auto w = medium.cell_weights();
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

// Adds scale * A_mu into `out` without materializing A_mu separately.
void accumulate_A(const MediumProfile& medium, double mu, double scale, Eigen::MatrixXd& out) {
  const auto& sigma_r = medium.sigma_r();
  const std::size_t m = medium.cells();
  const DirectionalSweep sweep(medium, mu);
  std::vector<double> source(m, 0.0);
  std::vector<double> column(m);
  for (std::size_t j = 0; j < m; ++j) {
    source[j] = sigma_r[j];
    sweep.cell_averages(source, 0.0, column);
    source[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += scale * column[i];
  }
}

struct Moments {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_quart = 0.0;
  double max = 0.0;
  Eigen::VectorXd entry_sum;
  Eigen::VectorXd entry_sum_sq;

  void add(double norm, const Eigen::VectorXd& delta) {
    if (count == 0) {
      entry_sum = Eigen::VectorXd::Zero(delta.size());
      entry_sum_sq = Eigen::VectorXd::Zero(delta.size());
    }
    ++count;
    sum += norm;
    sum_sq += norm * norm;
    sum_quart += norm * norm * norm * norm;
    max = std::max(max, norm);
    entry_sum += delta;
    entry_sum_sq += delta.cwiseProduct(delta);
  }

  DeltaStats finish(std::size_t n) const {
    DeltaStats s;
    s.n = n;
    s.samples = count;
    const double c = static_cast<double>(count);
    s.mean_norm = sum / c;
    s.mean_sq_norm = sum_sq / c;
    s.max_norm = max;
    const double var_norm = std::max(0.0, (sum_sq - c * s.mean_norm * s.mean_norm) / (c - 1.0));
    const double var_sq = std::max(0.0, (sum_quart - c * s.mean_sq_norm * s.mean_sq_norm) / (c - 1.0));
    s.se_mean_norm = std::sqrt(var_norm / c);
    s.se_mean_sq = std::sqrt(var_sq / c);
    s.mean_delta = entry_sum / c;
    const Eigen::VectorXd var = ((entry_sum_sq - c * s.mean_delta.cwiseProduct(s.mean_delta)) / (c - 1.0)).cwiseMax(0.0);
    s.se_delta = (var / c).cwiseSqrt();
    return s;
  }
};

// Evaluates `per_sample(index)` in blocks and folds results in index order.
template <class PerSample>
DeltaStats collect(std::size_t n, std::size_t sample_count, unsigned jobs, PerSample per_sample) {
  if (sample_count < 2) throw Error(ErrorCode::InvalidArgument, "statistics need at least two samples");
  constexpr std::size_t kBlock = 256;
  Moments moments;
  std::vector<std::pair<double, Eigen::VectorXd>> block(kBlock);
  for (std::size_t begin = 0; begin < sample_count; begin += kBlock) {
    const std::size_t len = std::min(kBlock, sample_count - begin);
    parallel_for(len, jobs, [&](std::size_t k) { block[k] = per_sample(begin + k); });
    for (std::size_t k = 0; k < len; ++k) moments.add(block[k].first, block[k].second);
  }
  return moments.finish(n);
}

}  // namespace

DenseOperator assemble_A(const MediumProfile& medium, double mu) {
  if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorCode::ZeroMu, "direction cosine must be nonzero");
  const auto m = static_cast<Eigen::Index>(medium.cells());
  DenseOperator op{Eigen::MatrixXd::Zero(m, m), weights_of(medium), "A(mu=" + std::to_string(mu) + ")"};
  accumulate_A(medium, mu, 1.0, op.entries);
  return op;
}

DenseOperator assemble_T(const MediumProfile& medium, const QuadratureSet& quad) {
  const auto m = static_cast<Eigen::Index>(medium.cells());
  (void)medium.sigma_r();
  DenseOperator op{Eigen::MatrixXd::Zero(m, m), weights_of(medium), "T[" + quad.provenance.to_string() + "]"};
  for (std::size_t l = 0; l < quad.size(); ++l) {
    if (quad.ordinates[l] == 0.0) throw Error(ErrorCode::ZeroMu, "quadrature contains a zero ordinate");
    accumulate_A(medium, quad.ordinates[l], quad.weights[l], op.entries);
  }
  return op;
}

ReferenceOperator reference_T(const MediumProfile& medium, double delta, std::size_t start_order, double entry_tol,
                              std::size_t max_order) {
  ReferenceOperator ref;
  ref.order = start_order;
  ref.op = assemble_T(medium, reference_gauss(delta, start_order));
  while (true) {
    if (ref.order * 2 > max_order) {
      throw Error(ErrorCode::ReferenceNotConverged,
                  "reference T did not settle below " + std::to_string(entry_tol) + " by order " +
                      std::to_string(ref.order));
    }
    DenseOperator finer = assemble_T(medium, reference_gauss(delta, ref.order * 2));
    ref.last_change = (finer.entries - ref.op.entries).cwiseAbs().maxCoeff();
    ref.op = std::move(finer);
    ref.order *= 2;
    if (ref.last_change < entry_tol) return ref;
  }
}

double weighted_norm(const DenseOperator& op, const NormOptions& options) {
  if (op.weight.size() != op.entries.rows() || op.entries.rows() != op.entries.cols() || (op.weight.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "operator needs a square matrix and positive weights");
  }
  const Eigen::MatrixXd b = op.euclidean_frame();
  const Eigen::MatrixXd gram = b.transpose() * b;
  const Eigen::Index m = gram.rows();
  if (gram.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Block power iteration with a Rayleigh-Ritz step: a single vector stalls
  // when the top singular values cluster, which happens for small delta.
  const Eigen::Index p = std::min<Eigen::Index>(m, 8);
  Eigen::MatrixXd v(m, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      v(i, j) = std::sin(1.0 + static_cast<double>(i) * (1.0 + static_cast<double>(j)) + 0.37 * static_cast<double>(j));
    }
  }
  v.col(0).array() += 1.0;

  double rho = 0.0;
  double prev_change = -1.0;
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const Eigen::MatrixXd w = gram * v;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    v = qr.householderQ() * Eigen::MatrixXd::Identity(m, p);
    const Eigen::MatrixXd gv = gram * v;
    const Eigen::MatrixXd h = v.transpose() * gv;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (h + h.transpose()));
    const double next = eig.eigenvalues()(p - 1);
    if (!(next > 0.0)) return 0.0;
    // Rotate to the Ritz basis, largest Ritz value first.
    v = v * eig.eigenvectors().rowwise().reverse();
    const double residual = (gram * v.col(0) - next * v.col(0)).norm();
    const double change = std::abs(next - rho);
    rho = next;
    if (it == 0) continue;
    if (residual <= options.rel_tol * rho) return std::sqrt(rho);
    if (change <= 1e-3 * options.rel_tol * rho) return std::sqrt(rho);
    if (change <= options.rel_tol * rho) {
      // Slow geometric convergence: extrapolate the remaining drift.
      const double ratio = prev_change > 0.0 ? std::min(change / prev_change, 0.999999) : 0.0;
      if (change * ratio / (1.0 - ratio) <= options.rel_tol * rho) return std::sqrt(rho);
    }
    prev_change = change;
  }
  throw Error(ErrorCode::NoConvergence, "power iteration did not converge");
}

double trace_AstarA(const DenseOperator& op) { return (op.adjoint() * op.entries).trace(); }

double trace_AAstar(const DenseOperator& op) { return (op.entries * op.adjoint()).trace(); }

double trace_AstarA(const MediumProfile& medium, double mu) { return trace_AstarA(assemble_A(medium, mu)); }

double trace_bound(const MediumProfile& medium, double mu) {
  const double len = medium.grid().x_right() - medium.grid().x_left();
  const double st = medium.max_sigma_t();
  return len * st * st * medium.max_inverse_sigma_t() / std::abs(mu);
}

DeltaStats delta_T_stats(const MediumProfile& medium, const VelocityPartition& partition, std::uint64_t master_seed,
                         std::size_t sample_count, const DenseOperator& t_ref, unsigned jobs) {
  return collect(partition.n, sample_count, jobs, [&](std::size_t s) {
    DenseOperator d = assemble_T(medium, rom_sample(partition, master_seed, s));
    d.entries -= t_ref.entries;
    const double norm = weighted_norm(d);
    return std::pair{norm, Eigen::VectorXd(d.entries.reshaped())};
  });
}

DeltaStats delta_T_stats(const MediumProfile& medium, const VelocityPartition& partition, std::uint64_t master_seed,
                         std::size_t sample_count, std::size_t ref_order, unsigned jobs) {
  const auto ref = reference_T(medium, partition.delta, ref_order);
  return delta_T_stats(medium, partition, master_seed, sample_count, ref.op, jobs);
}

ScalarFlux average_boundary_term(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad) {
  ScalarFlux out{std::vector<double>(medium.cells(), 0.0)};
  for (std::size_t l = 0; l < quad.size(); ++l) {
    const auto b = boundary_term(medium, quad.ordinates[l], boundary);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += quad.weights[l] * b[i];
  }
  return out;
}

ReferenceBoundary reference_boundary_term(const MediumProfile& medium, const BoundarySpec& boundary, double delta,
                                          std::size_t start_order, double entry_tol, std::size_t max_order) {
  ReferenceBoundary ref;
  ref.order = start_order;
  ref.b = average_boundary_term(medium, boundary, reference_gauss(delta, start_order));
  while (true) {
    if (ref.order * 2 > max_order) {
      throw Error(ErrorCode::ReferenceNotConverged, "reference boundary term did not settle");
    }
    ScalarFlux finer = average_boundary_term(medium, boundary, reference_gauss(delta, ref.order * 2));
    ref.last_change = 0.0;
    for (std::size_t i = 0; i < finer.size(); ++i) ref.last_change = std::max(ref.last_change, std::abs(finer[i] - ref.b[i]));
    ref.b = std::move(finer);
    ref.order *= 2;
    if (ref.last_change < entry_tol) return ref;
  }
}

DeltaStats delta_b_stats(const MediumProfile& medium, const BoundarySpec& boundary, const VelocityPartition& partition,
                         std::uint64_t master_seed, std::size_t sample_count, const ScalarFlux& b_ref, unsigned jobs) {
  const auto w = medium.cell_weights();
  return collect(partition.n, sample_count, jobs, [&](std::size_t s) {
    ScalarFlux d = average_boundary_term(medium, boundary, rom_sample(partition, master_seed, s));
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b_ref[i];
    const double norm = weighted_l2_norm(d.values, w);
    return std::pair{norm, Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(d.values.data(), static_cast<Eigen::Index>(d.size())))};
  });
}

DeltaStats delta_b_stats(const MediumProfile& medium, const BoundarySpec& boundary, const VelocityPartition& partition,
                         std::uint64_t master_seed, std::size_t sample_count, std::size_t ref_order, unsigned jobs) {
  const auto ref = reference_boundary_term(medium, boundary, partition.delta, ref_order);
  return delta_b_stats(medium, boundary, partition, master_seed, sample_count, ref.b, jobs);
}

}  // namespace romslab
