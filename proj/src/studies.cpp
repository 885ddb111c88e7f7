#include "romslab/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "romslab/error.hpp"
#include "romslab/operator_lab.hpp"

namespace romslab {

namespace {

using nlohmann::json;

json fit_json(const ErrorTable& table) {
  try {
    const auto fit = fit_slope(table);
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}, {"points", fit.points}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewPoints) throw;
    return {{"error", e.what()}};
  }
}

json rows_json(const ErrorTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row = {{"n", r.n}, {"estimate", r.estimate}, {"se", r.se}, {"samples", r.samples}, {"flagged", r.flagged},
                {"wall_time_s", r.wall_time}};
    if (r.noise_floor > 0.0) row["noise_floor"] = r.noise_floor;
    rows.push_back(row);
  }
  return rows;
}

StudyOutcome operator_study(const RunConfig& config, StudyKind kind, unsigned jobs) {
  using Clock = std::chrono::steady_clock;
  const auto medium = config.operator_medium();
  const double delta = config.study.delta;
  StudyOutcome out;
  out.kind = kind;
  ErrorTable table;
  table.label = std::string(to_string(kind));
  json extra = json::array();

  std::optional<ReferenceOperator> t_ref;
  std::optional<ReferenceBoundary> b_ref;
  if (kind == StudyKind::DeltaT) t_ref = reference_T(medium, delta, config.op.ref_order);
  else b_ref = reference_boundary_term(medium, config.study.boundary, delta, config.op.ref_order);

  for (std::size_t n : config.op.n_list) {
    const auto start = Clock::now();
    const auto partition = build_partition(n, delta, config.study.layout, config.alpha_max);
    const DeltaStats s =
        kind == StudyKind::DeltaT
            ? delta_T_stats(medium, partition, config.study.master_seed, config.op.samples, t_ref->op, jobs)
            : delta_b_stats(medium, config.study.boundary, partition, config.study.master_seed, config.op.samples,
                            b_ref->b, jobs);
    ErrorRow row;
    row.n = n;
    row.estimate = s.mean_sq_norm;
    row.se = s.se_mean_sq;
    row.samples = s.samples;
    row.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    table.rows.push_back(row);

    double z = 0.0;
    for (Eigen::Index i = 0; i < s.mean_delta.size(); ++i) {
      if (s.se_delta(i) > 0.0) z = std::max(z, std::abs(s.mean_delta(i)) / s.se_delta(i));
    }
    extra.push_back({{"n", n}, {"mean_norm", s.mean_norm}, {"se_mean_norm", s.se_mean_norm}, {"max_norm", s.max_norm},
                     {"n_times_max_norm", static_cast<double>(n) * s.max_norm}, {"max_abs_mean_over_se", z}});
  }
  out.summary["cells"] = medium.cells();
  out.summary["per_n"] = extra;
  if (t_ref) out.summary["reference"] = {{"order", t_ref->order}, {"last_change", t_ref->last_change}};
  if (b_ref) out.summary["reference"] = {{"order", b_ref->order}, {"last_change", b_ref->last_change}};
  out.summary["fit"] = fit_json(table);
  out.summary["rows"] = rows_json(table);
  out.table = std::move(table);
  return out;
}

}  // namespace

StudyKind parse_study_kind(std::string_view name) {
  if (name == "single-run") return StudyKind::SingleRun;
  if (name == "bias") return StudyKind::Bias;
  if (name == "dom" || name == "dom-midpoint") return StudyKind::DomMidpoint;
  if (name == "dom-gauss") return StudyKind::DomGauss;
  if (name == "delta-t") return StudyKind::DeltaT;
  if (name == "delta-b") return StudyKind::DeltaB;
  if (name == "regularization") return StudyKind::Regularization;
  throw Error(ErrorCode::Config, "unknown study '" + std::string(name) +
                                     "' (single-run, bias, dom, dom-gauss, delta-t, delta-b, regularization)");
}

std::string_view to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::SingleRun: return "single-run";
    case StudyKind::Bias: return "bias";
    case StudyKind::DomMidpoint: return "dom-midpoint";
    case StudyKind::DomGauss: return "dom-gauss";
    case StudyKind::DeltaT: return "delta-t";
    case StudyKind::DeltaB: return "delta-b";
    case StudyKind::Regularization: return "regularization";
  }
  return "unknown";
}

StudyOutcome run_study(const RunConfig& config, StudyKind kind, unsigned jobs) {
  if (kind == StudyKind::DeltaT || kind == StudyKind::DeltaB) return operator_study(config, kind, jobs);

  StudyConfig sc = config.study;
  sc.jobs = jobs;
  StudyOutcome out;
  out.kind = kind;
  out.summary["study"] = std::string(to_string(kind));

  if (kind == StudyKind::Regularization) {
    auto reg = regularization_study(sc, config.regularization_deltas, config.regularization_reference);
    json rows = json::array();
    bool all = true;
    for (const auto& r : reg.rows) {
      rows.push_back({{"delta", r.delta}, {"error", r.error}, {"consistency", r.consistency}, {"bound", r.bound},
                      {"holds", r.holds}, {"order", r.order}});
      all = all && r.holds;
    }
    out.summary["reference_delta"] = reg.reference_delta;
    out.summary["tolerance"] = reg.tolerance;
    out.summary["rows"] = rows;
    out.summary["bound_holds"] = all;
    out.regularization = std::move(reg);
    return out;
  }

  const auto ref = reference_solution(sc);
  ErrorTable table;
  switch (kind) {
    case StudyKind::SingleRun: table = single_run_error_study(sc, ref); break;
    case StudyKind::Bias: table = bias_study(sc, ref); break;
    case StudyKind::DomMidpoint: table = dom_error_study(sc, DomRule::Kind::Midpoint, ref); break;
    case StudyKind::DomGauss: table = dom_error_study(sc, DomRule::Kind::Gauss, ref); break;
    default: break;
  }
  out.summary["reference"] = {{"order", ref.order}, {"certificate", ref.certificate}};
  out.summary["fit"] = fit_json(table);
  out.summary["rows"] = rows_json(table);
  out.table = std::move(table);
  return out;
}

}  // namespace romslab
