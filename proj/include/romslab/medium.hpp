#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace romslab {

/// Cell edges of the slab [x_left, x_right]; M cells, M+1 strictly increasing edges.
class SpatialGrid {
 public:
  explicit SpatialGrid(std::vector<double> edges);

  static SpatialGrid uniform(double x_left, double x_right, std::size_t cells);

  std::size_t cells() const noexcept { return edges_.size() - 1; }
  double x_left() const noexcept { return edges_.front(); }
  double x_right() const noexcept { return edges_.back(); }
  double width(std::size_t i) const noexcept { return edges_[i + 1] - edges_[i]; }
  const std::vector<double>& edges() const noexcept { return edges_; }

  /// Splits every cell into `factor` equal sub-cells.
  SpatialGrid refined(std::size_t factor) const;

  bool operator==(const SpatialGrid&) const = default;

 private:
  std::vector<double> edges_;
};

inline constexpr double kDefaultLambdaMax = 0.999;

/// Piecewise-constant cross sections and source on a SpatialGrid.
///
/// The scattering ratio lambda = max_i sigma_s/sigma_t is derived at
/// construction. When lambda > 0 the normalized scattering cross section
/// sigma_r = sigma_s / lambda is also stored; it satisfies sigma_r <= sigma_t.
/// A pure absorber (lambda == 0) has no sigma_r.
class MediumProfile {
 public:
  const SpatialGrid& grid() const noexcept { return grid_; }
  std::size_t cells() const noexcept { return grid_.cells(); }
  const std::vector<double>& sigma_t() const noexcept { return sigma_t_; }
  const std::vector<double>& sigma_s() const noexcept { return sigma_s_; }
  const std::vector<double>& q() const noexcept { return q_; }
  double lambda() const noexcept { return lambda_; }
  bool pure_absorber() const noexcept { return lambda_ == 0.0; }

  /// Throws PureAbsorber when lambda == 0.
  const std::vector<double>& sigma_r() const;

  /// sigma_t[i] * h_i, the cell weight of the L2(sigma_t) inner product.
  std::vector<double> cell_weights() const;

  double max_sigma_t() const;
  double max_inverse_sigma_t() const;
  /// max_i sigma_t / sigma_r; infinite if some sigma_r vanishes.
  double max_sigma_t_over_sigma_r() const;

  /// Same medium on grid().refined(factor).
  MediumProfile refined(std::size_t factor) const;

  /// Same cross sections with a different source.
  MediumProfile with_source(std::vector<double> q) const;

 private:
  friend MediumProfile make_medium(SpatialGrid, std::vector<double>, std::vector<double>,
                                   std::vector<double>, double);
  MediumProfile(SpatialGrid grid) : grid_(std::move(grid)) {}

  SpatialGrid grid_;
  std::vector<double> sigma_t_;
  std::vector<double> sigma_s_;
  std::vector<double> q_;
  std::vector<double> sigma_r_;
  double lambda_ = 0.0;
};

MediumProfile make_medium(SpatialGrid grid, std::vector<double> sigma_t,
                          std::vector<double> sigma_s, std::vector<double> q,
                          double lambda_max = kDefaultLambdaMax);

/// Uniform grid with constant coefficients.
MediumProfile make_uniform_medium(double x_left, double x_right, std::size_t cells,
                                  double sigma_t, double sigma_s, double q,
                                  double lambda_max = kDefaultLambdaMax);

/// Cell-averaged scalar flux.
struct ScalarFlux {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Exact L2(sigma_t) norm of the piecewise-constant flux.
double weighted_l2_norm(const ScalarFlux& flux, const MediumProfile& medium);
double weighted_l2_norm(std::span<const double> values, std::span<const double> cell_weights);
double weighted_l2_distance(const ScalarFlux& a, const ScalarFlux& b, const MediumProfile& medium);

// Inflow boundary data ------------------------------------------------------

struct ConstantInflow {
  double value = 0.0;
};

/// value(mu) = slope * mu + intercept
struct LinearInflow {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Piecewise-linear interpolation in sorted mu, clamped outside the table.
struct TabulatedInflow {
  std::vector<double> mu;
  std::vector<double> value;
};

using InflowFunction = std::variant<ConstantInflow, LinearInflow, TabulatedInflow>;

enum class Side { Left, Right };

/// Left data is used on mu > 0, right data on mu < 0.
struct BoundarySpec {
  InflowFunction left = ConstantInflow{};
  InflowFunction right = ConstantInflow{};

  static BoundarySpec vacuum() { return {}; }
};

/// Validates table shape and ordering; with `require_nonnegative` also rejects
/// negative data on the relevant half interval.
void validate_boundary(const BoundarySpec& spec, bool require_nonnegative = false);

double evaluate(const InflowFunction& f, double mu);

/// Side-checked evaluation: left requires mu > 0, right requires mu < 0.
double eval_boundary(const BoundarySpec& spec, Side side, double mu);

/// Inflow value for direction mu, picking the side from the sign of mu.
double inflow_value(const BoundarySpec& spec, double mu);

/// Lipschitz constant in mu (largest table slope for tabulated data).
double lipschitz_constant(const InflowFunction& f);

bool is_zero(const InflowFunction& f);

}  // namespace romslab
