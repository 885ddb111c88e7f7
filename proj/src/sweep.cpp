#include "romslab/sweep.hpp"

#include <cmath>

#include "romslab/error.hpp"

namespace romslab {

namespace {

void check_mu(double mu) {
  if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorCode::ZeroMu, "direction cosine must be nonzero and finite");
}

}  // namespace

std::vector<double> optical_depth(const MediumProfile& medium, double mu) {
  check_mu(mu);
  std::vector<double> tau(medium.cells());
  for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = medium.sigma_t()[i] * medium.grid().width(i) / std::abs(mu);
  return tau;
}

double escape_factor(double tau) {
  if (tau < 1e-6) return 1.0 - tau / 2.0 + tau * tau / 6.0 - tau * tau * tau / 24.0;
  return -std::expm1(-tau) / tau;
}

DirectionalSweep::DirectionalSweep(const MediumProfile& medium, double mu) : mu_(mu) {
  const auto tau = optical_depth(medium, mu);
  const std::size_t m = tau.size();
  inv_sigma_t_.resize(m);
  transmission_.resize(m);
  absorbed_.resize(m);
  escape_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    inv_sigma_t_[i] = 1.0 / medium.sigma_t()[i];
    transmission_[i] = std::exp(-tau[i]);
    absorbed_[i] = -std::expm1(-tau[i]);
    escape_[i] = escape_factor(tau[i]);
  }
}

void DirectionalSweep::cell_averages(std::span<const double> source, double inflow, std::span<double> out) const {
  const std::size_t m = cells();
  if (source.size() != m || out.size() != m) throw Error(ErrorCode::GridMismatch, "source length does not match the grid");
  double psi = inflow;
  auto step = [&](std::size_t i) {
    const double equilibrium = source[i] * inv_sigma_t_[i];
    out[i] = equilibrium + (psi - equilibrium) * escape_[i];
    psi = psi * transmission_[i] + equilibrium * absorbed_[i];
  };
  if (mu_ > 0.0) {
    for (std::size_t i = 0; i < m; ++i) step(i);
  } else {
    for (std::size_t i = m; i-- > 0;) step(i);
  }
}

AngularFlux DirectionalSweep::solve(std::span<const double> source, double inflow) const {
  const std::size_t m = cells();
  if (source.size() != m) throw Error(ErrorCode::GridMismatch, "source length does not match the grid");
  AngularFlux f;
  f.mu = mu_;
  f.cell_avg.resize(m);
  f.edge_values.resize(m + 1);
  double psi = inflow;
  auto step = [&](std::size_t i) {
    const double equilibrium = source[i] * inv_sigma_t_[i];
    f.cell_avg[i] = equilibrium + (psi - equilibrium) * escape_[i];
    psi = psi * transmission_[i] + equilibrium * absorbed_[i];
  };
  if (mu_ > 0.0) {
    f.edge_values[0] = inflow;
    for (std::size_t i = 0; i < m; ++i) {
      step(i);
      f.edge_values[i + 1] = psi;
    }
  } else {
    f.edge_values[m] = inflow;
    for (std::size_t i = m; i-- > 0;) {
      step(i);
      f.edge_values[i] = psi;
    }
  }
  return f;
}

AngularFlux sweep_direction(const MediumProfile& medium, double mu, std::span<const double> cell_source, double inflow) {
  return DirectionalSweep(medium, mu).solve(cell_source, inflow);
}

ScalarFlux apply_A(const MediumProfile& medium, double mu, const ScalarFlux& phi) {
  check_mu(mu);
  const auto& sigma_r = medium.sigma_r();
  if (phi.size() != medium.cells()) throw Error(ErrorCode::GridMismatch, "flux length does not match the grid");
  std::vector<double> source(phi.size());
  for (std::size_t i = 0; i < source.size(); ++i) source[i] = sigma_r[i] * phi[i];
  ScalarFlux out{std::vector<double>(phi.size())};
  DirectionalSweep(medium, mu).cell_averages(source, 0.0, out.values);
  return out;
}

ScalarFlux boundary_term(const MediumProfile& medium, double mu, const BoundarySpec& boundary) {
  check_mu(mu);
  const double inflow = inflow_value(boundary, mu);
  const std::vector<double> zero(medium.cells(), 0.0);
  ScalarFlux out{std::vector<double>(medium.cells())};
  DirectionalSweep(medium, mu).cell_averages(zero, inflow, out.values);
  return out;
}

}  // namespace romslab
