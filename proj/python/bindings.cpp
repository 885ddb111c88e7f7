#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "romslab/config.hpp"
#include "romslab/error.hpp"
#include "romslab/experiments.hpp"
#include "romslab/io.hpp"
#include "romslab/operator_lab.hpp"
#include "romslab/solver.hpp"
#include "romslab/studies.hpp"
#include "romslab/sweep.hpp"

namespace py = pybind11;
using namespace romslab;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

DomRule dom_rule(const std::string& name, std::size_t order) {
  if (name == "midpoint") return DomRule::midpoint();
  if (name == "gauss") return DomRule::gauss(order);
  throw Error(ErrorCode::InvalidRule, "unknown rule '" + name + "' (midpoint or gauss)");
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["final_residual"] = r.final_residual;
  d["converged"] = r.converged;
  d["contraction_estimate"] = r.contraction_estimate;
  d["stopping_threshold"] = r.stopping_threshold;
  d["residuals"] = r.residuals;
  return d;
}

}  // namespace

PYBIND11_MODULE(_romslab, m) {
  m.doc() = "Slab transport with discrete and random ordinates";

  static py::exception<Error> error(m, "RomslabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<SpatialGrid>(m, "SpatialGrid")
      .def(py::init<std::vector<double>>(), py::arg("edges"))
      .def_static("uniform", &SpatialGrid::uniform, py::arg("x_left"), py::arg("x_right"), py::arg("cells"))
      .def_property_readonly("cells", &SpatialGrid::cells)
      .def_property_readonly("edges", &SpatialGrid::edges);

  py::class_<MediumProfile>(m, "Medium")
      .def(py::init(&make_medium), py::arg("grid"), py::arg("sigma_t"), py::arg("sigma_s"), py::arg("q"),
           py::arg("lambda_max") = kDefaultLambdaMax)
      .def_static("uniform", &make_uniform_medium, py::arg("x_left"), py::arg("x_right"), py::arg("cells"),
                  py::arg("sigma_t"), py::arg("sigma_s"), py::arg("q"), py::arg("lambda_max") = kDefaultLambdaMax)
      .def_property_readonly("grid", &MediumProfile::grid)
      .def_property_readonly("cells", &MediumProfile::cells)
      .def_property_readonly("sigma_t", &MediumProfile::sigma_t)
      .def_property_readonly("sigma_s", &MediumProfile::sigma_s)
      .def_property_readonly("q", &MediumProfile::q)
      .def_property_readonly("scattering_ratio", &MediumProfile::lambda)
      .def("refined", &MediumProfile::refined, py::arg("factor"));

  py::class_<ConstantInflow>(m, "ConstantInflow")
      .def(py::init<double>(), py::arg("value") = 0.0)
      .def_readwrite("value", &ConstantInflow::value);
  py::class_<LinearInflow>(m, "LinearInflow")
      .def(py::init([](double slope, double intercept) { return LinearInflow{slope, intercept}; }), py::arg("slope"),
           py::arg("intercept") = 0.0)
      .def_readwrite("slope", &LinearInflow::slope)
      .def_readwrite("intercept", &LinearInflow::intercept);
  py::class_<TabulatedInflow>(m, "TabulatedInflow")
      .def(py::init([](std::vector<double> mu, std::vector<double> value) {
             return TabulatedInflow{std::move(mu), std::move(value)};
           }),
           py::arg("mu"), py::arg("value"))
      .def_readwrite("mu", &TabulatedInflow::mu)
      .def_readwrite("value", &TabulatedInflow::value);
  py::class_<BoundarySpec>(m, "Boundary")
      .def(py::init([](InflowFunction left, InflowFunction right) {
             BoundarySpec b{std::move(left), std::move(right)};
             validate_boundary(b);
             return b;
           }),
           py::arg("left") = InflowFunction{ConstantInflow{}}, py::arg("right") = InflowFunction{ConstantInflow{}})
      .def("inflow", [](const BoundarySpec& b, double mu) { return inflow_value(b, mu); }, py::arg("mu"));

  py::class_<VelocityPartition>(m, "VelocityPartition")
      .def_readonly("n", &VelocityPartition::n)
      .def_readonly("delta", &VelocityPartition::delta)
      .def_readonly("weights", &VelocityPartition::weights)
      .def_readonly("alpha", &VelocityPartition::alpha)
      .def_property_readonly("cells", [](const VelocityPartition& p) {
        std::vector<std::pair<double, double>> out;
        for (const auto& c : p.cells) out.emplace_back(c.lo, c.hi);
        return out;
      });
  m.def(
      "build_partition",
      [](std::size_t n, double delta, double ratio, double alpha_cap) {
        return build_partition(n, delta, PartitionLayout{ratio}, alpha_cap);
      },
      py::arg("n"), py::arg("delta"), py::arg("ratio") = 1.0, py::arg("alpha_cap") = kDefaultAlphaCap,
      "Even partition of [-1,-delta) U (delta,1]; ratio != 1 grades the cell widths.");

  py::class_<QuadratureSet>(m, "Quadrature")
      .def_readonly("ordinates", &QuadratureSet::ordinates)
      .def_readonly("weights", &QuadratureSet::weights)
      .def_readonly("delta", &QuadratureSet::delta)
      .def_property_readonly("provenance", [](const QuadratureSet& q) { return q.provenance.to_string(); })
      .def("__len__", &QuadratureSet::size);
  m.def(
      "dom_quadrature",
      [](const VelocityPartition& p, const std::string& rule, std::size_t order) {
        return dom_quadrature(p, dom_rule(rule, order));
      },
      py::arg("partition"), py::arg("rule") = "midpoint", py::arg("order") = 0);
  m.def("rom_sample", py::overload_cast<const VelocityPartition&, std::uint64_t, std::uint64_t>(&rom_sample),
        py::arg("partition"), py::arg("master_seed"), py::arg("sample_index"),
        "One random-ordinates draw, reproducible from (master_seed, sample_index).");
  m.def("reference_gauss", &reference_gauss, py::arg("delta"), py::arg("points_per_half"));

  m.def(
      "solve",
      [](const MediumProfile& medium, const BoundarySpec& boundary, const QuadratureSet& quad, double tol,
         std::size_t max_iter, unsigned jobs) {
        SolveOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        opt.jobs = jobs;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(medium, boundary, quad, opt);
        }
        return py::make_tuple(to_array(r.phi.values), report_dict(r.report));
      },
      py::arg("medium"), py::arg("boundary"), py::arg("quadrature"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 10000, py::arg("jobs") = 1,
      "Source iteration; returns (cell-average scalar flux, report dict).");
  m.def(
      "sweep",
      [](const MediumProfile& medium, double mu, std::vector<double> source, double inflow) {
        const auto psi = sweep_direction(medium, mu, source, inflow);
        return py::make_tuple(to_array(psi.cell_avg), to_array(psi.edge_values));
      },
      py::arg("medium"), py::arg("mu"), py::arg("source"), py::arg("inflow") = 0.0,
      "Step-characteristics sweep along mu; returns (cell averages, edge values).");
  m.def(
      "weighted_l2_norm",
      [](const MediumProfile& medium, std::vector<double> values) { return weighted_l2_norm(ScalarFlux{values}, medium); },
      py::arg("medium"), py::arg("values"));

  m.def(
      "assemble_A", [](const MediumProfile& medium, double mu) { return assemble_A(medium, mu).entries; },
      py::arg("medium"), py::arg("mu"), "Dense matrix of the zero-inflow solution operator for direction mu.");
  m.def(
      "assemble_T", [](const MediumProfile& medium, const QuadratureSet& q) { return assemble_T(medium, q).entries; },
      py::arg("medium"), py::arg("quadrature"));
  m.def(
      "weighted_norm",
      [](const Eigen::MatrixXd& entries, const Eigen::VectorXd& weight, double rel_tol) {
        return weighted_norm(DenseOperator{entries, weight, "python"}, NormOptions{rel_tol});
      },
      py::arg("matrix"), py::arg("weights"), py::arg("rel_tol") = 1e-10,
      "Operator norm in the inner product sum f g w.");
  m.def(
      "cell_weights", [](const MediumProfile& medium) { return medium.cell_weights(); }, py::arg("medium"));
  m.def(
      "trace_AstarA", [](const MediumProfile& medium, double mu) { return trace_AstarA(medium, mu); },
      py::arg("medium"), py::arg("mu"));

  py::class_<RunConfig>(m, "RunConfig")
      .def_property_readonly("resolved", [](const RunConfig& rc) { return rc.resolved.dump(); })
      .def_property_readonly("n_list", [](const RunConfig& rc) { return rc.study.n_list; })
      .def_property_readonly("master_seed", [](const RunConfig& rc) { return rc.study.master_seed; })
      .def_property_readonly("medium", [](const RunConfig& rc) { return rc.study.medium; })
      .def_property_readonly("boundary", [](const RunConfig& rc) { return rc.study.boundary; })
      .def_property_readonly("quadrature", &RunConfig::solve_quadrature)
      .def_property_readonly("tol", [](const RunConfig& rc) { return rc.study.tol; })
      .def_property_readonly("max_iter", [](const RunConfig& rc) { return rc.study.max_iter; });
  m.def(
      "_parse_config", [](const std::string& text) { return parse_config(nlohmann::json::parse(text)); },
      py::arg("text"));
  m.def(
      "_config_hash", [](const RunConfig& rc) { return config_hash(rc.resolved); }, py::arg("config"));
  m.def(
      "_run_study",
      [](const RunConfig& rc, const std::string& kind, unsigned jobs) {
        StudyOutcome out;
        {
          py::gil_scoped_release release;
          out = run_study(rc, parse_study_kind(kind), jobs);
        }
        std::ostringstream csv;
        if (out.table) write_error_table(csv, *out.table);
        if (out.regularization) write_regularization_table(csv, *out.regularization);
        return py::make_tuple(out.summary.dump(), csv.str());
      },
      py::arg("config"), py::arg("kind"), py::arg("jobs") = 1);
}
