// romslab: solve, study and validate slab transport configurations.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "romslab/config.hpp"
#include "romslab/error.hpp"
#include "romslab/io.hpp"
#include "romslab/solver.hpp"
#include "romslab/studies.hpp"

#ifndef ROMSLAB_VERSION
#define ROMSLAB_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace romslab;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotConverged = 2;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool force = false;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunConfig load(const Common& c) {
  std::ifstream in(c.config);
  if (!in) throw Error(ErrorCode::Config, "cannot read configuration file " + c.config);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, c.config + ": invalid JSON: " + e.what());
  }
  if (c.seed) {
    if (!doc.is_object()) throw Error(ErrorCode::Config, ": configuration must be a JSON object");
    doc["study"]["master_seed"] = *c.seed;
  }
  return parse_config(doc);
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
}

json manifest(const RunConfig& rc, const std::string& command, const std::string& started,
              const std::vector<fs::path>& outputs) {
  json files = json::array();
  for (const auto& p : outputs) files.push_back(p.filename().string());
  return {{"config_hash", config_hash(rc.resolved)},
          {"master_seed", rc.study.master_seed},
          {"tool_version", ROMSLAB_VERSION},
          {"command", command},
          {"started", started},
          {"finished", utc_now()},
          {"outputs", files}};
}

int cmd_validate(const Common& c) {
  const RunConfig rc = load(c);
  double alpha = 0.0;
  for (std::size_t n : rc.study.n_list) {
    alpha = std::max(alpha, build_partition(n, rc.study.delta, rc.study.layout, rc.alpha_max).max_alpha());
  }
  std::cout << "configuration ok\n"
            << "lambda        " << rc.study.medium.lambda() << '\n'
            << "alpha_max     " << alpha << '\n'
            << "cells         " << rc.study.medium.cells() << '\n'
            << "operator_cells " << rc.op.cells << '\n'
            << "delta         " << rc.study.delta << '\n'
            << "n_max         " << rc.study.n_list.back() << '\n'
            << "tol_limit     " << rc.study.tol_limit() << '\n'
            << "config_hash   " << config_hash(rc.resolved) << '\n';
  return kOk;
}

int cmd_solve(const Common& c, const std::string& command, const std::optional<std::string>& rule,
              const std::optional<std::size_t>& n) {
  const std::string started = utc_now();
  RunConfig rc = load(c);
  if (rule || n) {
    // Re-parse with the overrides so they pass the same checks as the file.
    json patch = rc.resolved;
    if (rule) patch["quadrature"]["rule"] = *rule;
    if (n) patch["quadrature"]["n"] = *n;
    rc = parse_config(patch);
  }
  const fs::path out = c.out;
  const fs::path report_path = fs::path(c.out).concat(".report.json");
  const fs::path manifest_path = fs::path(c.out).concat(".manifest.json");
  if (!c.force && (fs::exists(out) || fs::exists(report_path))) {
    std::cerr << "error: " << out.string() << " exists; pass --force to overwrite\n";
    return kUsage;
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());

  const auto quad = rc.solve_quadrature();
  SolveOptions options = rc.study.solve_options();
  options.jobs = c.jobs;
  const auto result = solve(rc.study.medium, rc.study.boundary, quad, options);

  {
    std::ofstream f(out);
    write_flux(f, result.phi, rc.study.medium.grid());
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out.string());
  }
  const auto& r = result.report;
  write_json(report_path, {{"converged", r.converged},
                           {"iterations", r.iterations},
                           {"final_residual", r.final_residual},
                           {"stopping_threshold", r.stopping_threshold},
                           {"contraction_estimate", r.contraction_estimate},
                           {"lambda", rc.study.medium.lambda()},
                           {"quadrature", quad.provenance.to_string()},
                           {"ordinates", quad.size()},
                           {"residuals", r.residuals}});
  write_json(manifest_path, manifest(rc, command, started, {out, report_path}));

  if (!r.converged) {
    std::cerr << "error: source iteration did not converge in " << r.iterations
              << " iterations (partial result written)\n";
    return kNotConverged;
  }
  std::cout << "converged in " << r.iterations << " iterations; wrote " << out.string() << '\n';
  return kOk;
}

int cmd_study(const Common& c, const std::string& command, const std::string& study, bool timings) {
  const std::string started = utc_now();
  const RunConfig rc = load(c);
  const StudyKind kind = parse_study_kind(study);
  const fs::path dir = c.out;
  if (fs::exists(dir) && !fs::is_directory(dir)) {
    std::cerr << "error: " << dir.string() << " is not a directory\n";
    return kUsage;
  }
  if (fs::exists(dir) && !fs::is_empty(dir) && !c.force) {
    std::cerr << "error: output directory " << dir.string() << " is not empty; pass --force to overwrite\n";
    return kUsage;
  }
  fs::create_directories(dir);

  const auto outcome = run_study(rc, kind, c.jobs);
  const fs::path csv = dir / (std::string(to_string(kind)) + ".csv");
  {
    std::ofstream f(csv);
    if (outcome.table) write_error_table(f, *outcome.table, timings);
    if (outcome.regularization) write_regularization_table(f, *outcome.regularization);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + csv.string());
  }
  json summary = outcome.summary;
  if (!timings && summary.contains("rows")) {
    for (auto& row : summary["rows"]) {
      if (row.contains("wall_time_s")) row["wall_time_s"] = 0.0;
    }
  }
  summary["config_hash"] = config_hash(rc.resolved);
  summary["master_seed"] = rc.study.master_seed;
  const fs::path summary_path = dir / "summary.json";
  write_json(summary_path, summary);
  write_json(dir / "manifest.json", manifest(rc, command, started, {csv, summary_path}));

  if (summary.contains("fit") && summary["fit"].contains("slope")) {
    std::cout << to_string(kind) << ": slope " << summary["fit"]["slope"].get<double>() << " over "
              << summary["fit"]["points"].get<std::size_t>() << " rows\n";
  } else {
    std::cout << to_string(kind) << ": wrote " << csv.string() << '\n';
  }
  return kOk;
}

void add_common(CLI::App* app, Common& c, bool needs_out) {
  app->add_option("--config", c.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  if (needs_out) app->add_option("--out", c.out, "output path (file for solve, directory for study)")->required();
  app->add_option("--seed", c.seed, "master seed, overrides the configuration");
  app->add_option("--jobs", c.jobs, "worker threads; never changes numerical output")->check(CLI::Range(1u, 1024u));
  app->add_flag("--force", c.force, "overwrite existing outputs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slab radiative transfer with discrete and random ordinates"};
  app.set_version_flag("--version", ROMSLAB_VERSION);
  app.require_subcommand(1);

  Common solve_opts, study_opts, validate_opts;
  std::optional<std::string> rule;
  std::optional<std::size_t> n;
  std::string study;
  bool timings = false;

  auto* solve_cmd = app.add_subcommand("solve", "solve one configuration and write the cell fluxes");
  add_common(solve_cmd, solve_opts, true);
  solve_cmd->add_option("--quadrature", rule, "midpoint, gauss, rom or reference (overrides the configuration)");
  solve_cmd->add_option("--n", n, "partition size (overrides the configuration)");

  auto* study_cmd = app.add_subcommand("study", "run a convergence or operator study");
  add_common(study_cmd, study_opts, true);
  study_cmd->add_option("--study", study, "single-run, bias, dom, dom-gauss, delta-t, delta-b, regularization")
      ->required();
  study_cmd->add_flag("--timings", timings, "write measured wall times into the CSV (breaks byte-identity)");

  auto* validate_cmd = app.add_subcommand("validate", "check a configuration without solving");
  add_common(validate_cmd, validate_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

  try {
    if (*solve_cmd) return cmd_solve(solve_opts, command, rule, n);
    if (*study_cmd) return cmd_study(study_opts, command, study, timings);
    return cmd_validate(validate_opts);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::NoConvergence:
      case ErrorCode::ReferenceNotConverged:
        std::cerr << "error: " << e.what() << '\n';
        return kNotConverged;
      default:
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
