// Thin pybind11 layer; rationals cross the boundary as "p/q" strings.

#include "rotkit/circle_lift.hpp"
#include "rotkit/covering_arith.hpp"
#include "rotkit/markov_graph.hpp"
#include "rotkit/model_io.hpp"
#include "rotkit/orbit_engine.hpp"
#include "rotkit/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rotkit;

namespace {

using PointList = std::vector<std::pair<std::string, std::string>>;

PLLift lift_from(const PointList& points) {
  std::vector<std::pair<Rational, Rational>> pts;
  for (const auto& [x, y] : points) pts.push_back({parse_rational(x), parse_rational(y)});
  return PLLift::from_points(pts);
}

py::dict interval_dict(const RotationInterval& r) {
  py::dict out;
  out["min"] = r.min.get_str();
  out["max"] = r.max.get_str();
  out["hull"] = r.hull;
  out["transitive"] = r.transitive;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() { return py::exception<Error>(m, "RotkitError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = error_type.get_stored();
      py::object inst = type(e.what());
      inst.attr("kind") = kind_name(e.kind());
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  py::class_<Model>(m, "Model")
      .def_static("load", &load_model, py::arg("path"))
      .def_static("parse", [](const std::string& text) { return parse_model(text, "<string>"); }, py::arg("text"))
      .def_readonly("name", &Model::name)
      .def_readonly("source", &Model::source)
      .def("point_names",
           [](const Model& model) {
             std::vector<std::string> out;
             for (const auto& [name, p] : model.points) out.push_back(name);
             return out;
           })
      .def("rotation_set", [](const Model& model) { return interval_dict(rotation_set(model.map)); })
      .def("rotation_set_of_power", [](const Model& model, int n) { return interval_dict(rotation_set_of_power(model.map, n)); },
           py::arg("n"))
      .def("transitive", [](const Model& model) { return check_transitive(model.map).transitive; })
      .def(
          "analyze_json",
          [](const Model& model, int horizon, int qmax, unsigned long seed) {
            AnalyzeOptions opts;
            opts.horizon = horizon;
            opts.qmax = qmax;
            opts.seed = seed;
            return analyze_report(model, opts).dump();
          },
          py::arg("horizon") = 256, py::arg("qmax") = 12, py::arg("seed") = 0)
      .def(
          "periods_json",
          [](const Model& model, long p, long q, int n_max, long budget) {
            PeriodSearchOptions opts;
            opts.budget = budget;
            return periods_report(model, periods_for_rotation(model.map, p, q, n_max, opts), budget).dump();
          },
          py::arg("p"), py::arg("q"), py::arg("n_max"), py::arg("budget") = 1000000)
      .def(
          "orbit_json",
          [](const Model& model, const std::string& spec, int steps) {
            OrbitOptions opts;
            opts.horizon = steps;
            return orbit_report(model, rotation_estimate(model.map, parse_point_spec(model, spec), opts)).dump();
          },
          py::arg("point"), py::arg("steps") = 200)
      .def("dot", [](const Model& model) { return markov_graph_dot(build_markov_graph(model.map)); });

  m.def("chi", [](const std::string& t) { return chi(parse_rational(t)); }, py::arg("t"));
  m.def("decompose", [](long N, long total) { return decompose(N, total).parts; }, py::arg("N"), py::arg("m"));
  m.def(
      "check_decomposition",
      [](long N, long total, std::vector<long> parts) { return check_decomposition(Decomposition{N, total, std::move(parts)}); },
      py::arg("N"), py::arg("m"), py::arg("parts"));
  m.def(
      "rho_exact",
      [](const PointList& points, int qmax) -> std::optional<std::string> {
        auto v = rho_exact(lift_from(points), qmax);
        if (!v) return std::nullopt;
        return v->get_str();
      },
      py::arg("points"), py::arg("qmax") = 12);
  m.def(
      "rho_enclosure",
      [](const PointList& points, int n) {
        RhoResult r = rho_enclosure(lift_from(points), n);
        return std::make_pair(r.lo.get_str(), r.hi.get_str());
      },
      py::arg("points"), py::arg("n"));
}
