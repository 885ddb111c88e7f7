#include "romslab/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "romslab/error.hpp"

namespace romslab {

SpatialGrid::SpatialGrid(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) {
    throw Error(ErrorCode::InvalidGrid, "a grid needs at least one cell");
  }
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i]) || !std::isfinite(edges_[i + 1]) || !(edges_[i + 1] > edges_[i])) {
      throw Error(ErrorCode::InvalidGrid, "edges must be finite and strictly increasing (edge " +
                                              std::to_string(i + 1) + ")");
    }
  }
}

SpatialGrid SpatialGrid::uniform(double x_left, double x_right, std::size_t cells) {
  if (cells == 0) throw Error(ErrorCode::InvalidGrid, "cell count must be positive");
  std::vector<double> edges(cells + 1);
  const double h = (x_right - x_left) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) edges[i] = x_left + h * static_cast<double>(i);
  edges.back() = x_right;
  return SpatialGrid(std::move(edges));
}

SpatialGrid SpatialGrid::refined(std::size_t factor) const {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "refinement factor must be positive");
  std::vector<double> edges;
  edges.reserve(cells() * factor + 1);
  for (std::size_t i = 0; i < cells(); ++i) {
    const double h = width(i) / static_cast<double>(factor);
    for (std::size_t k = 0; k < factor; ++k) edges.push_back(edges_[i] + h * static_cast<double>(k));
  }
  edges.push_back(edges_.back());
  return SpatialGrid(std::move(edges));
}

const std::vector<double>& MediumProfile::sigma_r() const {
  if (pure_absorber()) {
    throw Error(ErrorCode::PureAbsorber, "sigma_r is undefined for a pure absorber (lambda = 0)");
  }
  return sigma_r_;
}

std::vector<double> MediumProfile::cell_weights() const {
  std::vector<double> w(cells());
  for (std::size_t i = 0; i < cells(); ++i) w[i] = sigma_t_[i] * grid_.width(i);
  return w;
}

double MediumProfile::max_sigma_t() const {
  return *std::max_element(sigma_t_.begin(), sigma_t_.end());
}

double MediumProfile::max_inverse_sigma_t() const {
  return 1.0 / *std::min_element(sigma_t_.begin(), sigma_t_.end());
}

double MediumProfile::max_sigma_t_over_sigma_r() const {
  const auto& sr = sigma_r();
  double out = 0.0;
  for (std::size_t i = 0; i < cells(); ++i) {
    if (sr[i] <= 0.0) return std::numeric_limits<double>::infinity();
    out = std::max(out, sigma_t_[i] / sr[i]);
  }
  return out;
}

MediumProfile MediumProfile::refined(std::size_t factor) const {
  auto expand = [&](const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size() * factor);
    for (double x : v) out.insert(out.end(), factor, x);
    return out;
  };
  return make_medium(grid_.refined(factor), expand(sigma_t_), expand(sigma_s_), expand(q_), 1.0);
}

MediumProfile MediumProfile::with_source(std::vector<double> q) const {
  return make_medium(grid_, sigma_t_, sigma_s_, std::move(q), 1.0);
}

MediumProfile make_medium(SpatialGrid grid, std::vector<double> sigma_t, std::vector<double> sigma_s,
                          std::vector<double> q, double lambda_max) {
  const std::size_t m = grid.cells();
  if (sigma_t.size() != m || sigma_s.size() != m || q.size() != m) {
    throw Error(ErrorCode::LengthMismatch, "sigma_t, sigma_s and q need one value per cell (" +
                                               std::to_string(m) + ")");
  }
  if (!(lambda_max > 0.0) || lambda_max > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "lambda_max must lie in (0, 1]");
  }
  double lambda = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(sigma_t[i] > 0.0) || !std::isfinite(sigma_t[i])) {
      throw Error(ErrorCode::NonPositiveSigmaT, "sigma_t[" + std::to_string(i) + "] must be positive");
    }
    if (!(sigma_s[i] >= 0.0) || !std::isfinite(sigma_s[i])) {
      throw Error(ErrorCode::NegativeData, "sigma_s[" + std::to_string(i) + "] must be nonnegative");
    }
    if (!(q[i] >= 0.0) || !std::isfinite(q[i])) {
      throw Error(ErrorCode::NegativeData, "q[" + std::to_string(i) + "] must be nonnegative");
    }
    const double ratio = sigma_s[i] / sigma_t[i];
    if (ratio >= 1.0 || ratio >= lambda_max) {
      throw Error(ErrorCode::LambdaAtLeastOne,
                  "sigma_s/sigma_t = " + std::to_string(ratio) + " in cell " + std::to_string(i) +
                      " reaches the cap " + std::to_string(std::min(lambda_max, 1.0)));
    }
    lambda = std::max(lambda, ratio);
  }

  MediumProfile out(std::move(grid));
  out.sigma_t_ = std::move(sigma_t);
  out.sigma_s_ = std::move(sigma_s);
  out.q_ = std::move(q);
  out.lambda_ = lambda;
  if (lambda > 0.0) {
    out.sigma_r_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      // Division can round sigma_r a hair above sigma_t in the argmax cell.
      out.sigma_r_[i] = std::min(out.sigma_s_[i] / lambda, out.sigma_t_[i]);
    }
  }
  return out;
}

MediumProfile make_uniform_medium(double x_left, double x_right, std::size_t cells, double sigma_t,
                                  double sigma_s, double q, double lambda_max) {
  return make_medium(SpatialGrid::uniform(x_left, x_right, cells), std::vector<double>(cells, sigma_t),
                     std::vector<double>(cells, sigma_s), std::vector<double>(cells, q), lambda_max);
}

double weighted_l2_norm(std::span<const double> values, std::span<const double> cell_weights) {
  if (values.size() != cell_weights.size()) {
    throw Error(ErrorCode::GridMismatch, "flux length does not match the grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[i] * values[i] * cell_weights[i];
  return std::sqrt(sum);
}

double weighted_l2_norm(const ScalarFlux& flux, const MediumProfile& medium) {
  const auto w = medium.cell_weights();
  return weighted_l2_norm(flux.values, w);
}

double weighted_l2_distance(const ScalarFlux& a, const ScalarFlux& b, const MediumProfile& medium) {
  if (a.size() != b.size() || a.size() != medium.cells()) {
    throw Error(ErrorCode::GridMismatch, "flux lengths do not match the grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d * medium.sigma_t()[i] * medium.grid().width(i);
  }
  return std::sqrt(sum);
}

// Boundary data ------------------------------------------------------------

namespace {

double eval_table(const TabulatedInflow& t, double mu) {
  if (mu <= t.mu.front()) return t.value.front();
  if (mu >= t.mu.back()) return t.value.back();
  const auto it = std::upper_bound(t.mu.begin(), t.mu.end(), mu);
  const std::size_t k = static_cast<std::size_t>(it - t.mu.begin());
  const double s = (mu - t.mu[k - 1]) / (t.mu[k] - t.mu[k - 1]);
  return t.value[k - 1] + s * (t.value[k] - t.value[k - 1]);
}

void validate_one(const InflowFunction& f, const char* side, bool nonneg, double lo, double hi) {
  const std::string where = std::string(side) + " boundary";
  if (const auto* c = std::get_if<ConstantInflow>(&f)) {
    if (!std::isfinite(c->value)) throw Error(ErrorCode::InvalidBoundary, where + ": non-finite value");
  } else if (const auto* l = std::get_if<LinearInflow>(&f)) {
    if (!std::isfinite(l->slope) || !std::isfinite(l->intercept)) {
      throw Error(ErrorCode::InvalidBoundary, where + ": non-finite coefficients");
    }
  } else {
    const auto& t = std::get<TabulatedInflow>(f);
    if (t.mu.empty() || t.mu.size() != t.value.size()) {
      throw Error(ErrorCode::InvalidBoundary, where + ": table needs matching, nonempty mu and value lists");
    }
    for (std::size_t i = 0; i < t.mu.size(); ++i) {
      if (!std::isfinite(t.mu[i]) || !std::isfinite(t.value[i])) {
        throw Error(ErrorCode::InvalidBoundary, where + ": non-finite table entry");
      }
      if (i > 0 && !(t.mu[i] > t.mu[i - 1])) {
        throw Error(ErrorCode::InvalidBoundary, where + ": table mu must be strictly increasing");
      }
    }
  }
  if (nonneg) {
    // Affine and piecewise-linear data attain their minimum at an endpoint or a node.
    for (double p : {lo, hi}) {
      if (evaluate(f, p) < 0.0) throw Error(ErrorCode::NegativeData, where + ": negative inflow data");
    }
    if (const auto* t = std::get_if<TabulatedInflow>(&f)) {
      for (std::size_t i = 0; i < t->mu.size(); ++i) {
        if (t->mu[i] >= lo && t->mu[i] <= hi && t->value[i] < 0.0) {
          throw Error(ErrorCode::NegativeData, where + ": negative inflow data");
        }
      }
    }
  }
}

}  // namespace

double evaluate(const InflowFunction& f, double mu) {
  return std::visit(
      [mu](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          return g.value;
        } else if constexpr (std::is_same_v<T, LinearInflow>) {
          return g.slope * mu + g.intercept;
        } else {
          return eval_table(g, mu);
        }
      },
      f);
}

void validate_boundary(const BoundarySpec& spec, bool require_nonnegative) {
  validate_one(spec.left, "left", require_nonnegative, 0.0, 1.0);
  validate_one(spec.right, "right", require_nonnegative, -1.0, 0.0);
}

double eval_boundary(const BoundarySpec& spec, Side side, double mu) {
  if (side == Side::Left && !(mu > 0.0)) {
    throw Error(ErrorCode::WrongHalf, "left inflow data is defined for mu > 0 only");
  }
  if (side == Side::Right && !(mu < 0.0)) {
    throw Error(ErrorCode::WrongHalf, "right inflow data is defined for mu < 0 only");
  }
  return evaluate(side == Side::Left ? spec.left : spec.right, mu);
}

double inflow_value(const BoundarySpec& spec, double mu) {
  if (mu == 0.0) throw Error(ErrorCode::ZeroMu, "direction cosine must be nonzero");
  return eval_boundary(spec, mu > 0.0 ? Side::Left : Side::Right, mu);
}

double lipschitz_constant(const InflowFunction& f) {
  if (std::holds_alternative<ConstantInflow>(f)) return 0.0;
  if (const auto* l = std::get_if<LinearInflow>(&f)) return std::abs(l->slope);
  const auto& t = std::get<TabulatedInflow>(f);
  double slope = 0.0;
  for (std::size_t i = 1; i < t.mu.size(); ++i) {
    slope = std::max(slope, std::abs((t.value[i] - t.value[i - 1]) / (t.mu[i] - t.mu[i - 1])));
  }
  return slope;
}

bool is_zero(const InflowFunction& f) {
  if (const auto* c = std::get_if<ConstantInflow>(&f)) return c->value == 0.0;
  if (const auto* l = std::get_if<LinearInflow>(&f)) return l->slope == 0.0 && l->intercept == 0.0;
  const auto& t = std::get<TabulatedInflow>(f);
  return std::all_of(t.value.begin(), t.value.end(), [](double v) { return v == 0.0; });
}

}  // namespace romslab
