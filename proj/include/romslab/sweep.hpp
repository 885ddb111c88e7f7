#pragma once

#include <span>
#include <vector>

#include "romslab/medium.hpp"

namespace romslab {

/// Exact solution of mu psi' + sigma_t psi = s for one direction, stored as
/// cell averages plus edge values.
struct AngularFlux {
  double mu = 0.0;
  std::vector<double> cell_avg;     // M values
  std::vector<double> edge_values;  // M+1 values, edge 0 at x_left
};

/// Per-cell optical depth sigma_t h / |mu|.
std::vector<double> optical_depth(const MediumProfile& medium, double mu);

/// (1 - e^{-tau}) / tau, with a Taylor branch below tau = 1e-6.
double escape_factor(double tau);

/// Upwind march for a fixed direction. The exponentials depend only on
/// (medium, mu), so source iteration builds one of these per ordinate and
/// reuses it every sweep.
class DirectionalSweep {
 public:
  DirectionalSweep(const MediumProfile& medium, double mu);

  double mu() const noexcept { return mu_; }
  std::size_t cells() const noexcept { return inv_sigma_t_.size(); }

  /// Cell averages of the solution with per-cell source and inflow value.
  void cell_averages(std::span<const double> source, double inflow, std::span<double> out) const;

  AngularFlux solve(std::span<const double> source, double inflow) const;

 private:
  double mu_;
  std::vector<double> inv_sigma_t_;
  std::vector<double> transmission_;  // e^{-tau}
  std::vector<double> absorbed_;      // 1 - e^{-tau}
  std::vector<double> escape_;        // (1 - e^{-tau}) / tau
};

AngularFlux sweep_direction(const MediumProfile& medium, double mu, std::span<const double> cell_source,
                            double inflow);

/// Discrete transport operator: zero-inflow sweep of the source sigma_r phi.
ScalarFlux apply_A(const MediumProfile& medium, double mu, const ScalarFlux& phi);

/// Cell averages of b_mu = B_mu psi_in(mu): the inflow carried through the slab
/// with no volume source.
ScalarFlux boundary_term(const MediumProfile& medium, double mu, const BoundarySpec& boundary);

}  // namespace romslab
