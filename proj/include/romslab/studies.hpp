#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "romslab/config.hpp"
#include "romslab/experiments.hpp"

namespace romslab {

enum class StudyKind { SingleRun, Bias, DomMidpoint, DomGauss, DeltaT, DeltaB, Regularization };

/// Accepts single-run, bias, dom (midpoint), dom-gauss, delta-t, delta-b,
/// regularization. Throws Config for anything else.
StudyKind parse_study_kind(std::string_view name);
std::string_view to_string(StudyKind kind);

struct StudyOutcome {
  StudyKind kind = StudyKind::SingleRun;
  std::optional<ErrorTable> table;                 // every study except regularization
  std::optional<RegularizationTable> regularization;
  nlohmann::json summary;                          // slope fit and study diagnostics
};

/// Runs one study from a parsed configuration. For delta-t and delta-b the
/// estimate column is the mean squared norm E||delta||^2.
StudyOutcome run_study(const RunConfig& config, StudyKind kind, unsigned jobs = 1);

}  // namespace romslab
