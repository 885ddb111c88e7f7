#include "romslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "romslab/error.hpp"
#include "romslab/parallel.hpp"

namespace romslab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double standard_error(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

ScalarFlux checked_solve(const StudyConfig& config, const QuadratureSet& quad) {
  auto result = solve(config.medium, config.boundary, quad, config.solve_options());
  if (!result.report.converged) {
    throw Error(ErrorCode::NoConvergence, "source iteration hit max_iter for " + quad.provenance.to_string());
  }
  return std::move(result.phi);
}

}  // namespace

SlopeFit fit_slope(const ErrorTable& table) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : table.rows) {
    if (row.flagged) continue;
    if (!(row.estimate > 0.0) || row.n == 0) {
      throw Error(ErrorCode::InvalidArgument, "slope fit needs positive estimates and n");
    }
    xs.push_back(std::log(static_cast<double>(row.n)));
    ys.push_back(std::log(row.estimate));
  }
  if (xs.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "slope fit needs at least 3 unflagged rows, got " + std::to_string(xs.size()));
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::TooFewPoints, "slope fit needs distinct n values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  fit.points = xs.size();
  return fit;
}

double StudyConfig::tol_limit() const {
  if (n_list.empty()) return 1e-3;
  const double n_max = static_cast<double>(*std::max_element(n_list.begin(), n_list.end()));
  return 1e-3 / (n_max * n_max * n_max);
}

void StudyConfig::validate() const {
  if (!(delta > 0.0) || !(delta < 1.0)) throw Error(ErrorCode::DeltaOutOfRange, "delta must lie in (0, 1)");
  if (n_list.empty()) throw Error(ErrorCode::Config, "n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] == 0 || n_list[i] % 2 != 0) {
      throw Error(ErrorCode::OddN, "every n must be even and positive, got " + std::to_string(n_list[i]));
    }
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw Error(ErrorCode::Config, "n_list must be strictly increasing");
  }
  if (samples < 16) throw Error(ErrorCode::Config, "samples must be at least 16");
  if (!(tol > 0.0) || tol > tol_limit()) {
    throw Error(ErrorCode::Config, "solver tol must be positive and at most 1e-3 n_max^-3 = " +
                                       std::to_string(tol_limit()));
  }
  if (max_iter == 0) throw Error(ErrorCode::Config, "max_iter must be positive");
  if (ref_order == 0 || ref_max_order < ref_order) throw Error(ErrorCode::Config, "reference orders are inconsistent");
  if (!(ref_tol > 0.0)) throw Error(ErrorCode::Config, "reference tolerance must be positive");
  if (image_shifts == 0 || bias_groups < 2) throw Error(ErrorCode::Config, "bias study needs shifts >= 1 and groups >= 2");
  validate_boundary(boundary);
}

SolveOptions StudyConfig::solve_options() const {
  SolveOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  options.jobs = 1;
  return options;
}

ReferenceSolution reference_solution(const StudyConfig& config) {
  ReferenceSolution ref;
  std::size_t order = config.ref_order;
  auto current = solve(config.medium, config.boundary, reference_gauss(config.delta, order), config.solve_options());
  while (2 * order <= config.ref_max_order) {
    auto next = solve(config.medium, config.boundary, reference_gauss(config.delta, 2 * order), config.solve_options());
    const double change = weighted_l2_distance(current.phi, next.phi, config.medium);
    order *= 2;
    current = std::move(next);
    if (change <= config.ref_tol) {
      if (!current.report.converged) break;
      ref.phi = std::move(current.phi);
      ref.order = order;
      ref.certificate = change;
      ref.report = std::move(current.report);
      return ref;
    }
  }
  throw Error(ErrorCode::ReferenceNotConverged,
              "reference solution did not settle to " + std::to_string(config.ref_tol) + " by order " +
                  std::to_string(config.ref_max_order));
}

ErrorTable single_run_error_study(const StudyConfig& config) {
  return single_run_error_study(config, reference_solution(config));
}

ErrorTable single_run_error_study(const StudyConfig& config, const ReferenceSolution& ref) {
  ErrorTable table;
  table.label = "single-run";
  for (std::size_t n : config.n_list) {
    const auto start = Clock::now();
    const auto partition = build_partition(n, config.delta, config.layout);
    std::vector<double> errors(config.samples);
    parallel_for(config.samples, config.jobs, [&](std::size_t s) {
      const auto phi = checked_solve(config, rom_sample(partition, config.master_seed, s));
      errors[s] = weighted_l2_distance(phi, ref.phi, config.medium);
    });
    ErrorRow row;
    row.n = n;
    row.estimate = mean_of(errors);
    row.se = standard_error(errors);
    row.samples = config.samples;
    row.wall_time = seconds_since(start);
    table.rows.push_back(row);
  }
  return table;
}

ErrorTable bias_study(const StudyConfig& config) { return bias_study(config, reference_solution(config)); }

ErrorTable bias_study(const StudyConfig& config, const ReferenceSolution& ref) {
  const auto images = SampleImage::group(config.image_shifts);
  const std::size_t cells = config.medium.cells();
  const auto weights = config.medium.cell_weights();

  ErrorTable table;
  table.label = "bias";
  for (std::size_t n : config.n_list) {
    const auto start = Clock::now();
    const auto partition = build_partition(n, config.delta, config.layout);
    // Per-group image averages, kept for the jackknife.
    std::vector<std::vector<double>> groups;
    std::size_t target = std::max<std::size_t>(2, config.bias_groups);
    ErrorRow row;
    row.n = n;
    while (true) {
      const std::size_t have = groups.size();
      groups.resize(target);
      parallel_for(target - have, config.jobs, [&](std::size_t k) {
        const std::size_t g = have + k;
        std::vector<double> avg(cells, 0.0);
        for (const auto& image : images) {
          const auto phi = checked_solve(config, rom_sample(partition, config.master_seed, g, image));
          for (std::size_t i = 0; i < cells; ++i) avg[i] += phi[i];
        }
        for (double& v : avg) v /= static_cast<double>(images.size());
        groups[g] = std::move(avg);
      });

      const std::size_t count = groups.size();
      const double gcount = static_cast<double>(count);
      std::vector<double> sum(cells, 0.0);
      for (const auto& a : groups) {
        for (std::size_t i = 0; i < cells; ++i) sum[i] += a[i];
      }
      std::vector<double> diff(cells);
      double noise = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        const double mean = sum[i] / gcount;
        diff[i] = mean - ref.phi[i];
        double var = 0.0;
        for (const auto& a : groups) var += (a[i] - mean) * (a[i] - mean);
        noise += weights[i] * var / (gcount - 1.0);
      }
      row.estimate = weighted_l2_norm(diff, weights);
      row.noise_floor = std::sqrt(noise / gcount);

      // Leave-one-group-out replicates of the estimate.
      std::vector<double> loo(count);
      std::vector<double> d(cells);
      for (std::size_t g = 0; g < count; ++g) {
        for (std::size_t i = 0; i < cells; ++i) d[i] = (sum[i] - groups[g][i]) / (gcount - 1.0) - ref.phi[i];
        loo[g] = weighted_l2_norm(d, weights);
      }
      const double loo_mean = mean_of(loo);
      double ss = 0.0;
      for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
      row.se = std::sqrt((gcount - 1.0) / gcount * ss);
      row.samples = count * images.size();

      const bool resolved = row.se <= row.estimate / 5.0 && row.noise_floor <= row.estimate / 5.0;
      if (resolved) break;
      if (2 * count * images.size() > config.max_solves) {
        row.flagged = true;
        break;
      }
      target = 2 * count;
    }
    row.wall_time = seconds_since(start);
    table.rows.push_back(row);
  }
  return table;
}

ErrorTable dom_error_study(const StudyConfig& config, DomRule::Kind rule) {
  return dom_error_study(config, rule, reference_solution(config));
}

ErrorTable dom_error_study(const StudyConfig& config, DomRule::Kind rule, const ReferenceSolution& ref) {
  ErrorTable table;
  table.label = rule == DomRule::Kind::Midpoint ? "dom-midpoint" : "dom-gauss";
  for (std::size_t n : config.n_list) {
    const auto start = Clock::now();
    const auto partition = build_partition(n, config.delta, config.layout);
    const DomRule r = rule == DomRule::Kind::Midpoint ? DomRule::midpoint() : DomRule::gauss(n / 2);
    const auto phi = checked_solve(config, dom_quadrature(partition, r));
    ErrorRow row;
    row.n = n;
    row.estimate = weighted_l2_distance(phi, ref.phi, config.medium);
    row.samples = 1;
    row.wall_time = seconds_since(start);
    table.rows.push_back(row);
  }
  return table;
}

RegularizationTable regularization_study(const StudyConfig& config, const std::vector<double>& deltas,
                                         double reference_delta) {
  if (deltas.empty()) throw Error(ErrorCode::InvalidArgument, "regularization study needs at least one delta");
  if (!(reference_delta > 0.0) || reference_delta >= *std::min_element(deltas.begin(), deltas.end())) {
    throw Error(ErrorCode::InvalidArgument, "reference delta must be positive and below every studied delta");
  }
  if (config.medium.pure_absorber()) {
    throw Error(ErrorCode::PureAbsorber, "regularization bound needs lambda > 0");
  }
  StudyConfig ref_config = config;
  ref_config.delta = reference_delta;
  const auto ref = reference_solution(ref_config);
  const auto source = total_source(config.medium, ref.phi);
  // Velocity average of the reference angular flux over the reference set,
  // with the same quadrature that defines f below.
  const auto ref_average = average_sweep(config.medium, config.boundary, reference_gauss(reference_delta, ref.order),
                                         source);

  RegularizationTable table;
  table.reference_delta = reference_delta;
  for (double delta : deltas) {
    StudyConfig c = config;
    c.delta = delta;
    const auto sol = reference_solution(c);
    const std::size_t order = std::max(sol.order, ref.order);
    const auto restricted = average_sweep(config.medium, config.boundary, reference_gauss(delta, order), source);

    RegularizationRow row;
    row.delta = delta;
    row.order = sol.order;
    row.error = weighted_l2_distance(ref.phi, sol.phi, config.medium);
    row.consistency = weighted_l2_distance(restricted, ref_average, config.medium);
    const double tolerance = ref.certificate + sol.certificate + 2.0 * config.tol;
    table.tolerance = std::max(table.tolerance, tolerance);
    row.bound = row.consistency / (1.0 - config.medium.lambda()) + tolerance;
    row.holds = row.error <= row.bound;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace romslab
