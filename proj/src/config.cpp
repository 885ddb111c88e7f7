#include "romslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "romslab/error.hpp"

namespace romslab {

extern const char* const kDefaultConfigText;  // generated from config/defaults.json

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& rule) {
  throw Error(ErrorCode::Config, pointer + ": " + rule);
}

void only_keys(const json& obj, const std::string& pointer, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(pointer, "must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(pointer + "/" + key, "unknown field");
  }
}

double number(const json& obj, const std::string& pointer, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(pointer + "/" + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(pointer + "/" + key, "must be finite");
  return x;
}

// Parsed documents store positive integers as unsigned, programmatic ones as signed.
bool is_nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::uint64_t unsigned_int(const json& obj, const std::string& pointer, const char* key) {
  const auto& v = obj.at(key);
  if (!is_nonnegative_integer(v)) {
    fail(pointer + "/" + key, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<std::size_t> size_list(const json& obj, const std::string& pointer, const char* key) {
  const auto& v = obj.at(key);
  const std::string p = pointer + "/" + key;
  if (!v.is_array() || v.empty()) fail(p, "must be a non-empty array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_nonnegative_integer(v[i])) fail(p + "/" + std::to_string(i), "must be a non-negative integer");
    out.push_back(v[i].get<std::size_t>());
  }
  return out;
}

void check_n_list(const std::vector<std::size_t>& ns, const std::string& pointer) {
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::string p = pointer + "/" + std::to_string(i);
    if (ns[i] == 0 || ns[i] % 2 != 0) fail(p, "partition size n must be even and positive (parity rule), got " + std::to_string(ns[i]));
    if (i > 0 && ns[i] <= ns[i - 1]) fail(p, "n values must be strictly increasing");
  }
}

/// Scalar or per-cell array of coefficients.
std::vector<double> coefficients(const json& medium, const char* key, std::size_t cells) {
  const std::string p = std::string("/medium/") + key;
  const auto& v = medium.at(key);
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(p, "must be finite");
    return std::vector<double>(cells, x);
  }
  if (!v.is_array()) fail(p, "must be a number or an array with one value per cell");
  if (v.size() != cells) fail(p, "has " + std::to_string(v.size()) + " values for " + std::to_string(cells) + " cells");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) fail(p + "/" + std::to_string(i), "must be a finite number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

MediumProfile build_medium(const json& m, std::size_t cells, double lambda_max) {
  const double xl = number(m, "/medium", "x_left");
  const double xr = number(m, "/medium", "x_right");
  if (!(xr > xl)) fail("/medium/x_right", "must exceed x_left");
  if (cells == 0) fail("/medium/cells", "must be positive");
  const auto st = coefficients(m, "sigma_t", cells);
  const auto ss = coefficients(m, "sigma_s", cells);
  const auto q = coefficients(m, "q", cells);
  const auto index = [&](const char* key, std::size_t i) {
    return std::string("/medium/") + key + (m.at(key).is_array() ? "/" + std::to_string(i) : "");
  };
  for (std::size_t i = 0; i < cells; ++i) {
    if (!(st[i] > 0.0)) fail(index("sigma_t", i), "sigma_t must be positive");
    if (ss[i] < 0.0) fail(index("sigma_s", i), "sigma_s must be non-negative");
    if (q[i] < 0.0) fail(index("q", i), "q must be non-negative");
    if (ss[i] / st[i] >= lambda_max) {
      fail(index("sigma_s", i), "scattering ratio lambda = sigma_s/sigma_t must stay below " +
                                    std::to_string(lambda_max) + " (lambda < 1 rule)");
    }
  }
  return make_medium(SpatialGrid::uniform(xl, xr, cells), st, ss, q, lambda_max);
}

InflowFunction inflow(const json& b, const std::string& pointer) {
  if (!b.is_object() || !b.contains("type") || !b.at("type").is_string()) fail(pointer + "/type", "must name the inflow type");
  const auto type = b.at("type").get<std::string>();
  if (type == "constant") {
    only_keys(b, pointer, {"type", "value"});
    return ConstantInflow{number(b, pointer, "value")};
  }
  if (type == "linear") {
    only_keys(b, pointer, {"type", "slope", "intercept"});
    return LinearInflow{number(b, pointer, "slope"), number(b, pointer, "intercept")};
  }
  if (type == "table") {
    only_keys(b, pointer, {"type", "mu", "value"});
    TabulatedInflow t;
    for (const char* key : {"mu", "value"}) {
      const auto& arr = b.at(key);
      if (!arr.is_array() || arr.empty()) fail(pointer + "/" + key, "must be a non-empty array of numbers");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) fail(pointer + "/" + key + "/" + std::to_string(i), "must be a number");
        (std::string(key) == "mu" ? t.mu : t.value).push_back(arr[i].get<double>());
      }
    }
    if (t.mu.size() != t.value.size()) fail(pointer + "/value", "must match the length of mu");
    for (std::size_t i = 1; i < t.mu.size(); ++i) {
      if (!(t.mu[i] > t.mu[i - 1])) fail(pointer + "/mu/" + std::to_string(i), "must be strictly increasing");
    }
    return t;
  }
  fail(pointer + "/type", "must be one of constant, linear, table");
}

}  // namespace

const nlohmann::json& default_config() {
  static const json doc = json::parse(kDefaultConfigText);
  return doc;
}

namespace {

RunConfig parse_checked(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("", "configuration must be a JSON object");
  json merged = default_config();
  for (const auto& [key, value] : doc.items()) {
    if (!merged.contains(key)) fail("/" + key, "unknown field");
    if (!value.is_object()) fail("/" + key, "must be an object");
    // Boundary sides are replaced whole, everything else merges field by field.
    if (key == "boundary") {
      for (const auto& [side, spec] : value.items()) merged[key][side] = spec;
    } else {
      merged[key].merge_patch(value);
    }
  }

  RunConfig rc;
  rc.resolved = merged;
  only_keys(merged, "", {"medium", "boundary", "angular", "study", "solver", "reference", "quadrature", "operator",
                         "regularization", "limits"});

  const auto& limits = merged.at("limits");
  only_keys(limits, "/limits", {"lambda_max", "alpha_max"});
  const double lambda_max = number(limits, "/limits", "lambda_max");
  if (!(lambda_max > 0.0) || lambda_max >= 1.0) fail("/limits/lambda_max", "must lie in (0, 1)");
  rc.alpha_max = number(limits, "/limits", "alpha_max");
  if (!(rc.alpha_max >= 1.0)) fail("/limits/alpha_max", "must be at least 1");

  const auto& m = merged.at("medium");
  only_keys(m, "/medium", {"x_left", "x_right", "cells", "sigma_t", "sigma_s", "q"});
  const std::size_t cells = unsigned_int(m, "/medium", "cells");
  StudyConfig& sc = rc.study;
  sc.medium = build_medium(m, cells, lambda_max);

  const auto& b = merged.at("boundary");
  only_keys(b, "/boundary", {"left", "right"});
  sc.boundary.left = inflow(b.at("left"), "/boundary/left");
  sc.boundary.right = inflow(b.at("right"), "/boundary/right");

  const auto& a = merged.at("angular");
  only_keys(a, "/angular", {"delta", "layout", "ratio"});
  sc.delta = number(a, "/angular", "delta");
  if (!(sc.delta > 0.0) || !(sc.delta < 1.0)) {
    fail("/angular/delta", "truncation delta must satisfy 0 < delta < 1 (truncation rule)");
  }
  if (!a.at("layout").is_string()) fail("/angular/layout", "must be \"uniform\" or \"graded\"");
  const auto layout = a.at("layout").get<std::string>();
  if (layout == "uniform") {
    sc.layout = PartitionLayout::uniform();
  } else if (layout == "graded") {
    const double ratio = number(a, "/angular", "ratio");
    if (!(ratio > 0.0)) fail("/angular/ratio", "must be positive");
    sc.layout = PartitionLayout::graded(ratio);
  } else {
    fail("/angular/layout", "must be \"uniform\" or \"graded\"");
  }

  const auto& s = merged.at("study");
  only_keys(s, "/study", {"n_list", "samples", "master_seed", "image_shifts", "bias_groups", "max_solves"});
  sc.n_list = size_list(s, "/study", "n_list");
  check_n_list(sc.n_list, "/study/n_list");
  sc.samples = unsigned_int(s, "/study", "samples");
  if (sc.samples < 16) fail("/study/samples", "must be at least 16");
  sc.master_seed = unsigned_int(s, "/study", "master_seed");
  sc.image_shifts = unsigned_int(s, "/study", "image_shifts");
  if (sc.image_shifts == 0) fail("/study/image_shifts", "must be positive");
  sc.bias_groups = unsigned_int(s, "/study", "bias_groups");
  if (sc.bias_groups < 2) fail("/study/bias_groups", "must be at least 2");
  sc.max_solves = unsigned_int(s, "/study", "max_solves");

  const auto& sv = merged.at("solver");
  only_keys(sv, "/solver", {"tol", "max_iter"});
  sc.tol = number(sv, "/solver", "tol");
  if (!(sc.tol > 0.0)) fail("/solver/tol", "must be positive");
  if (sc.tol > sc.tol_limit()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", sc.tol_limit());
    fail("/solver/tol", std::string("must not exceed 1e-3 * n_max^-3 = ") + buf + " (tolerance rule)");
  }
  sc.max_iter = unsigned_int(sv, "/solver", "max_iter");
  if (sc.max_iter == 0) fail("/solver/max_iter", "must be positive");

  const auto& r = merged.at("reference");
  only_keys(r, "/reference", {"order", "max_order", "tol"});
  sc.ref_order = unsigned_int(r, "/reference", "order");
  sc.ref_max_order = unsigned_int(r, "/reference", "max_order");
  sc.ref_tol = number(r, "/reference", "tol");
  if (sc.ref_order == 0) fail("/reference/order", "must be positive");
  if (sc.ref_max_order < sc.ref_order) fail("/reference/max_order", "must be at least order");
  if (!(sc.ref_tol > 0.0)) fail("/reference/tol", "must be positive");

  for (std::size_t i = 0; i < sc.n_list.size(); ++i) {
    try {
      build_partition(sc.n_list[i], sc.delta, sc.layout, rc.alpha_max);
    } catch (const Error& e) {
      fail("/study/n_list/" + std::to_string(i), e.what());
    }
  }

  const auto& qd = merged.at("quadrature");
  only_keys(qd, "/quadrature", {"rule", "n", "sample", "order"});
  if (!qd.at("rule").is_string()) fail("/quadrature/rule", "must be a string");
  const auto rule = qd.at("rule").get<std::string>();
  if (rule == "midpoint") rc.quadrature.rule = QuadratureChoice::Rule::Midpoint;
  else if (rule == "gauss") rc.quadrature.rule = QuadratureChoice::Rule::Gauss;
  else if (rule == "rom") rc.quadrature.rule = QuadratureChoice::Rule::Rom;
  else if (rule == "reference") rc.quadrature.rule = QuadratureChoice::Rule::Reference;
  else fail("/quadrature/rule", "must be one of midpoint, gauss, rom, reference");
  rc.quadrature.n = unsigned_int(qd, "/quadrature", "n");
  if (rc.quadrature.n == 0 || rc.quadrature.n % 2 != 0) {
    fail("/quadrature/n", "partition size n must be even and positive (parity rule)");
  }
  try {
    build_partition(rc.quadrature.n, sc.delta, sc.layout, rc.alpha_max);
  } catch (const Error& e) {
    fail("/quadrature/n", e.what());
  }
  rc.quadrature.sample = unsigned_int(qd, "/quadrature", "sample");
  rc.quadrature.order = unsigned_int(qd, "/quadrature", "order");
  if (rc.quadrature.order == 0) fail("/quadrature/order", "must be positive");

  const auto& op = merged.at("operator");
  only_keys(op, "/operator", {"cells", "n_list", "samples", "ref_order"});
  rc.op.cells = unsigned_int(op, "/operator", "cells");
  if (rc.op.cells == 0) fail("/operator/cells", "must be positive");
  if (rc.op.cells != cells) {
    for (const char* key : {"sigma_t", "sigma_s", "q"}) {
      if (m.at(key).is_array()) fail("/operator/cells", "must equal /medium/cells when coefficients are per-cell arrays");
    }
  }
  rc.op.n_list = size_list(op, "/operator", "n_list");
  check_n_list(rc.op.n_list, "/operator/n_list");
  rc.op.samples = unsigned_int(op, "/operator", "samples");
  if (rc.op.samples < 2) fail("/operator/samples", "must be at least 2");
  rc.op.ref_order = unsigned_int(op, "/operator", "ref_order");
  if (rc.op.ref_order == 0) fail("/operator/ref_order", "must be positive");

  const auto& rg = merged.at("regularization");
  only_keys(rg, "/regularization", {"deltas", "reference_delta"});
  const auto& ds = rg.at("deltas");
  if (!ds.is_array() || ds.empty()) fail("/regularization/deltas", "must be a non-empty array of numbers");
  rc.regularization_deltas.clear();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::string p = "/regularization/deltas/" + std::to_string(i);
    if (!ds[i].is_number()) fail(p, "must be a number");
    const double d = ds[i].get<double>();
    if (!(d > 0.0) || !(d < 1.0)) fail(p, "truncation delta must satisfy 0 < delta < 1 (truncation rule)");
    rc.regularization_deltas.push_back(d);
  }
  rc.regularization_reference = number(rg, "/regularization", "reference_delta");
  if (!(rc.regularization_reference > 0.0) ||
      rc.regularization_reference >= *std::min_element(rc.regularization_deltas.begin(), rc.regularization_deltas.end())) {
    fail("/regularization/reference_delta", "must be positive and below every studied delta");
  }

  // Anything the field checks above missed is still caught here.
  try {
    sc.validate();
  } catch (const Error& e) {
    fail("", e.what());
  }
  return rc;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  try {
    return parse_checked(doc);
  } catch (const nlohmann::json::exception& e) {
    // A required field was removed (null in the document) or has the wrong shape.
    throw Error(ErrorCode::Config, std::string("malformed configuration: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read configuration file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(doc);
}

MediumProfile RunConfig::operator_medium() const {
  return build_medium(resolved.at("medium"), op.cells, resolved.at("limits").at("lambda_max").get<double>());
}

QuadratureSet RunConfig::solve_quadrature() const {
  const auto partition = build_partition(quadrature.n, study.delta, study.layout, alpha_max);
  switch (quadrature.rule) {
    case QuadratureChoice::Rule::Midpoint: return dom_quadrature(partition, DomRule::midpoint());
    case QuadratureChoice::Rule::Gauss: return dom_quadrature(partition, DomRule::gauss(quadrature.n / 2));
    case QuadratureChoice::Rule::Rom: return rom_sample(partition, study.master_seed, quadrature.sample);
    case QuadratureChoice::Rule::Reference: return reference_gauss(study.delta, quadrature.order);
  }
  return {};
}

std::string config_hash(const nlohmann::json& resolved) {
  const std::string text = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace romslab
