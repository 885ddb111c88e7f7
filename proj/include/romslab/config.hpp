#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "romslab/angular.hpp"
#include "romslab/experiments.hpp"
#include "romslab/medium.hpp"

namespace romslab {

/// Quadrature used by the `solve` command.
struct QuadratureChoice {
  enum class Rule { Midpoint, Gauss, Rom, Reference } rule = Rule::Midpoint;
  std::size_t n = 32;
  std::uint64_t sample = 0;
  std::size_t order = 16;  // Gauss points per half for the reference rule
};

struct OperatorStudyConfig {
  std::size_t cells = 40;
  std::vector<std::size_t> n_list{8, 16, 32, 64};
  std::size_t samples = 2000;
  std::size_t ref_order = 256;
};

struct RunConfig {
  StudyConfig study;
  QuadratureChoice quadrature;
  OperatorStudyConfig op;
  std::vector<double> regularization_deltas{0.2, 0.1, 0.05};
  double regularization_reference = 0.0125;
  double alpha_max = kDefaultAlphaCap;
  nlohmann::json resolved;  // defaults merged with the user document

  /// The study medium on op.cells uniform cells (same coefficients).
  MediumProfile operator_medium() const;
  QuadratureSet solve_quadrature() const;
};

/// The checked-in defaults document.
const nlohmann::json& default_config();

/// Merges `doc` over the defaults and checks every field and invariant.
/// Throws Error(Config, "<json pointer>: <rule>") on the first violation.
RunConfig parse_config(const nlohmann::json& doc);

RunConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical dump of the resolved document.
std::string config_hash(const nlohmann::json& resolved);

}  // namespace romslab
