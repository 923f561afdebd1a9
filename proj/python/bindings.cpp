#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "germflow/cli/commands.hpp"
#include "germflow/germflow.hpp"

namespace py = pybind11;
using namespace germflow;

namespace {

std::span<const double> view(const Eigen::VectorXd& v) { return as_span(v); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "germflow core bindings";

  py::register_exception<Error>(m, "GermflowError");

  py::enum_<Frame>(m, "Frame")
      .value("singular", Frame::singular)
      .value("euclidean", Frame::euclidean);

  py::class_<WeightSystem>(m, "WeightSystem")
      .def(py::init<std::vector<int>>())
      .def_static("unit", &WeightSystem::unit)
      .def_property_readonly("weights", &WeightSystem::weights)
      .def_property_readonly("q", &WeightSystem::q)
      .def("dilate", [](const WeightSystem& w, const Eigen::VectorXd& u, double t) {
        return w.dilate(view(u), t);
      });

  py::class_<SigmaSet>(m, "SigmaSet")
      .def(py::init<std::size_t, std::vector<std::vector<int>>>())
      .def_static("origin", &SigmaSet::origin)
      .def_property_readonly("n", &SigmaSet::n)
      .def_property_readonly("subspaces", &SigmaSet::subspaces);

  py::class_<MapGerm>(m, "MapGerm")
      .def_property_readonly("n", &MapGerm::n)
      .def_property_readonly("l", &MapGerm::l)
      .def_property_readonly("p", &MapGerm::p)
      .def("evaluate", [](const MapGerm& g, const Eigen::VectorXd& u) { return g.evaluate(view(u)); })
      .def("jacobian_x", [](const MapGerm& g, const Eigen::VectorXd& u) { return g.jacobian_x(view(u)); })
      .def("__add__", &MapGerm::operator+)
      .def("__sub__", &MapGerm::operator-);

  py::class_<GermSpec>(m, "GermSpec")
      .def_readonly("germ", &GermSpec::germ)
      .def_readonly("weights", &GermSpec::weights)
      .def_readonly("sigma", &GermSpec::sigma)
      .def_readonly("job", &GermSpec::job)
      .def_property_readonly("group_order", [](const GermSpec& s) { return s.group.order(); })
      .def("__str__", &print_germ_spec);

  m.def("parse_germ_spec", &parse_germ_spec, py::arg("text"));
  m.def("load_germ_spec", &load_germ_spec, py::arg("path"));

  m.def("rho", [](const WeightSystem& w, const Eigen::VectorXd& u) { return rho(w, view(u)); });
  m.def("weighted_distance", [](const Eigen::VectorXd& x, const SigmaSet& s, const WeightSystem& w) {
    return weighted_distance(view(x), s, w);
  });

  py::class_<KuoCertificate>(m, "KuoCertificate")
      .def_property_readonly("verdict", [](const KuoCertificate& c) { return std::string(to_string(c.verdict)); })
      .def_readonly("samples", &KuoCertificate::samples)
      .def_readonly("proposals", &KuoCertificate::proposals)
      .def_readonly("min_margin", &KuoCertificate::min_margin)
      .def_readonly("fitted_exponent", &KuoCertificate::fitted_exponent)
      .def_readonly("note", &KuoCertificate::note)
      .def_property_readonly("witness", [](const KuoCertificate& c) -> py::object {
        if (!c.witness) return py::none();
        return py::cast(c.witness->point);
      })
      .def("holds", &KuoCertificate::holds);

  m.def(
      "check_kuo_condition",
      [](const GermSpec& spec, double r, double delta, double width, double radius, std::size_t n,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return check_kuo_condition(spec.germ, spec.sigma, spec.weights, r, delta,
                                   HornSpec{r, width, radius}, n, seed);
      },
      py::arg("spec"), py::arg("r") = 3.0, py::arg("delta") = 1.0, py::arg("width") = 0.5,
      py::arg("radius") = 0.5, py::arg("samples") = 20000, py::arg("seed") = 42);

  py::class_<PerturbationOrderReport>(m, "PerturbationOrderReport")
      .def("passes", &PerturbationOrderReport::passes)
      .def("summary", &PerturbationOrderReport::summary)
      .def_property_readonly("min_value_order", &PerturbationOrderReport::min_value_order)
      .def_property_readonly("min_derivative_order", &PerturbationOrderReport::min_derivative_order);

  m.def("perturbation_order", [](const GermSpec& spec, const GermSpec& pert, int d) {
    return perturbation_order(pert.germ, spec.sigma, spec.weights, d);
  }, py::arg("spec"), py::arg("pert"), py::arg("d"));

  m.def("jets_agree_on_sigma", [](const MapGerm& f, const MapGerm& g, int k, const SigmaSet& sigma,
                                  std::size_t samples, std::uint64_t seed) {
    return jets_agree_on_sigma(f, g, k, sigma, samples, seed).agree;
  }, py::arg("f"), py::arg("g"), py::arg("k"), py::arg("sigma"), py::arg("samples") = 1000,
     py::arg("seed") = 42);

  py::class_<HomotopyProblem>(m, "HomotopyProblem")
      .def(py::init([](const GermSpec& spec, const GermSpec& pert, double r, double width, double radius) {
             return HomotopyProblem(spec.germ, pert.germ, spec.weights, spec.sigma,
                                    HornSpec{r, width, radius}, spec.group);
           }),
           py::arg("spec"), py::arg("pert"), py::arg("r") = 3.0, py::arg("width") = 0.5,
           py::arg("radius") = 0.5)
      .def("value", [](const HomotopyProblem& p, const Eigen::VectorXd& u, double t) {
        return p.value(view(u), t);
      });

  m.def("integrate_flow", [](const HomotopyProblem& problem, const Eigen::VectorXd& u0, double t0, double t1) {
    FlowTrace trace;
    {
      py::gil_scoped_release release;
      trace = integrate_flow(problem, u0, t0, t1);
    }
    py::dict out;
    out["reason"] = std::string(to_string(trace.reason));
    out["final"] = trace.final_point();
    out["steps"] = trace.states.size();
    out["relative_drift"] = trace.relative_drift();
    return out;
  }, py::arg("problem"), py::arg("u0"), py::arg("t0") = 0.0, py::arg("t1") = 1.0);

  m.def("build_homeomorphism", [](const HomotopyProblem& problem, std::size_t seeds, std::uint64_t seed) {
    HomeomorphismReport report;
    {
      py::gil_scoped_release release;
      const auto points = zero_set_seeds(problem.base(), problem.sigma(), problem.weights(),
                                         problem.horn().radius, seeds, seed);
      report = build_homeomorphism(problem, points);
    }
    py::dict out;
    out["samples"] = report.samples.size();
    out["failures"] = report.failures;
    out["max_round_trip"] = report.max_round_trip;
    out["passed"] = report.passed();
    std::vector<Eigen::VectorXd> phi;
    for (const auto& s : report.samples) phi.push_back(s.phi);
    out["phi"] = phi;
    return out;
  }, py::arg("problem"), py::arg("seeds") = 100, py::arg("seed") = 42);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
