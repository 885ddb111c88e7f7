#include "romslab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "romslab/error.hpp"
#include "romslab/parallel.hpp"

namespace romslab {

namespace {

void check_quadrature(const MediumProfile& medium, const QuadratureSet& quad) {
  if (quad.size() == 0 || quad.weights.size() != quad.size()) {
    throw Error(ErrorCode::InvalidArgument, "quadrature needs matching ordinates and weights");
  }
  for (double mu : quad.ordinates) {
    if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorCode::ZeroMu, "quadrature contains a zero ordinate");
  }
  (void)medium;
}

/// Sweeps for a fixed quadrature, with exponentials and inflow values cached.
class QuadratureSweeper {
 public:
  QuadratureSweeper(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad,
                    unsigned jobs)
      : quad_(quad), jobs_(jobs), cells_(medium.cells()) {
    check_quadrature(medium, quad);
    sweeps_.reserve(quad.size());
    inflow_.reserve(quad.size());
    for (double mu : quad.ordinates) {
      sweeps_.emplace_back(medium, mu);
      inflow_.push_back(inflow_value(boundary, mu));
    }
    if (jobs_ > 1) scratch_.assign(quad.size(), std::vector<double>(cells_));
  }

  void average(std::span<const double> source, std::vector<double>& out) {
    out.assign(cells_, 0.0);
    if (jobs_ <= 1) {
      std::vector<double> avg(cells_);
      for (std::size_t l = 0; l < sweeps_.size(); ++l) {
        sweeps_[l].cell_averages(source, inflow_[l], avg);
        const double w = quad_.weights[l];
        for (std::size_t i = 0; i < cells_; ++i) out[i] += w * avg[i];
      }
      return;
    }
    parallel_for(sweeps_.size(), jobs_, [&](std::size_t l) { sweeps_[l].cell_averages(source, inflow_[l], scratch_[l]); });
    for (std::size_t l = 0; l < sweeps_.size(); ++l) {
      const double w = quad_.weights[l];
      for (std::size_t i = 0; i < cells_; ++i) out[i] += w * scratch_[l][i];
    }
  }

 private:
  const QuadratureSet& quad_;
  unsigned jobs_;
  std::size_t cells_;
  std::vector<DirectionalSweep> sweeps_;
  std::vector<double> inflow_;
  std::vector<std::vector<double>> scratch_;
};

double contraction_from(const std::vector<double>& residuals) {
  if (residuals.size() < 2) return 0.0;
  const std::size_t window = std::min<std::size_t>(5, residuals.size() - 1);
  const double last = residuals.back();
  const double first = residuals[residuals.size() - 1 - window];
  if (first <= 0.0) return 0.0;
  return std::pow(last / first, 1.0 / static_cast<double>(window));
}

}  // namespace

std::vector<double> total_source(const MediumProfile& medium, const ScalarFlux& phi) {
  if (phi.size() != medium.cells()) throw Error(ErrorCode::GridMismatch, "flux length does not match the grid");
  std::vector<double> s(phi.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = medium.sigma_s()[i] * phi[i] + medium.q()[i];
  return s;
}

ScalarFlux average_sweep(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad,
                         std::span<const double> source, unsigned jobs) {
  QuadratureSweeper sweeper(medium, boundary, quad, jobs);
  ScalarFlux out;
  sweeper.average(source, out.values);
  return out;
}

SolveResult solve(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad,
                  const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
  QuadratureSweeper sweeper(medium, boundary, quad, options.jobs);

  const double lam = std::max(medium.lambda(), 0.1);
  const auto weights = medium.cell_weights();
  const std::size_t m = medium.cells();

  SolveResult result;
  result.report.stopping_threshold = options.tol * (1.0 - lam) / lam;
  ScalarFlux phi{std::vector<double>(m, 0.0)};
  std::vector<double> source(m);
  std::vector<double> next;

  for (std::size_t k = 1; k <= options.max_iter; ++k) {
    for (std::size_t i = 0; i < m; ++i) source[i] = medium.sigma_s()[i] * phi[i] + medium.q()[i];
    sweeper.average(source, next);
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = next[i] - phi[i];
      diff += d * d * weights[i];
    }
    diff = std::sqrt(diff);
    phi.values.swap(next);
    result.report.iterations = k;
    result.report.residuals.push_back(diff);
    if (options.on_iterate) options.on_iterate(k, phi);
    if (diff <= result.report.stopping_threshold) {
      result.report.converged = true;
      break;
    }
  }
  result.report.final_residual = result.report.residuals.empty() ? 0.0 : result.report.residuals.back();
  result.report.contraction_estimate = contraction_from(result.report.residuals);
  result.phi = std::move(phi);
  return result;
}

std::vector<AngularFlux> angular_fluxes(const MediumProfile& medium, const BoundarySpec& boundary,
                                        const QuadratureSet& quad, const ScalarFlux& phi) {
  check_quadrature(medium, quad);
  const auto source = total_source(medium, phi);
  std::vector<AngularFlux> out;
  out.reserve(quad.size());
  for (double mu : quad.ordinates) out.push_back(sweep_direction(medium, mu, source, inflow_value(boundary, mu)));
  return out;
}

NeumannSum neumann_partial_sum(const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad,
                               std::size_t terms) {
  check_quadrature(medium, quad);
  const auto& sigma_r = medium.sigma_r();
  const std::size_t m = medium.cells();

  ScalarFlux q_over_sr{std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    if (medium.q()[i] == 0.0) continue;
    if (sigma_r[i] <= 0.0) throw Error(ErrorCode::InvalidArgument, "q/sigma_r is undefined where sigma_r = 0");
    q_over_sr.values[i] = medium.q()[i] / sigma_r[i];
  }

  auto apply_T = [&](const ScalarFlux& f) {
    ScalarFlux out{std::vector<double>(m, 0.0)};
    for (std::size_t l = 0; l < quad.size(); ++l) {
      const auto a = apply_A(medium, quad.ordinates[l], f);
      for (std::size_t i = 0; i < m; ++i) out.values[i] += quad.weights[l] * a[i];
    }
    return out;
  };

  ScalarFlux term = apply_T(q_over_sr);
  for (std::size_t l = 0; l < quad.size(); ++l) {
    const auto b = boundary_term(medium, quad.ordinates[l], boundary);
    for (std::size_t i = 0; i < m; ++i) term.values[i] += quad.weights[l] * b[i];
  }

  NeumannSum out{term, weighted_l2_norm(term, medium)};
  double scale = 1.0;
  for (std::size_t p = 1; p <= terms; ++p) {
    term = apply_T(term);
    scale *= medium.lambda();
    for (std::size_t i = 0; i < m; ++i) out.phi.values[i] += scale * term[i];
  }
  return out;
}

}  // namespace romslab
