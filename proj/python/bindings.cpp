#include <memory>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bvpair/cantor.hpp"
#include "bvpair/error.hpp"
#include "bvpair/measure.hpp"
#include "bvpair/report.hpp"
#include "bvpair/scenario.hpp"
#include "bvpair/verify.hpp"

namespace py = pybind11;
using namespace bvpair;

namespace {

// Held by pybind11 through a shared_ptr so the built members stay valid.
struct PyScenario {
  Scenario sc;

  const PairingContext& ctx() const { return *sc.ctx; }

  PairingMeasure measure(const std::string& variant, double lam) const {
    return ctx().pairing(variant_from_string(variant), ctx().constant(lam));
  }
};

std::shared_ptr<PyScenario> built(Scenario sc) {
  build_scenario(sc);
  return std::make_shared<PyScenario>(PyScenario{std::move(sc)});
}

}  // namespace

PYBIND11_MODULE(_bvpair, m) {
  m.doc() = "Native core of the bvpair package";
  m.attr("tool_version") = kToolVersion;
  m.attr("schema_version") = kSchemaVersion;

  static py::exception<Error> exc(m, "BvpairError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.code())) + ": " + e.what();
      PyErr_SetString(exc.ptr(), msg.c_str());
    }
  });

  m.def("cantor_cdf", [](double x) { return cantor_cdf(x); }, py::arg("x"));
  m.def("cantor_cdf_rational", [](std::uint64_t p, std::uint64_t q) { return cantor_cdf_rational(p, q); },
        py::arg("num"), py::arg("den"));
  m.def("check_names", &check_names);

  py::class_<PyScenario, std::shared_ptr<PyScenario>>(m, "Scenario")
      .def_static(
          "load", [](const std::string& path, bool strict) { return built(parse_scenario(path, strict)); },
          py::arg("path"), py::arg("strict") = false)
      .def_static(
          "from_string",
          [](const std::string& text, bool strict) { return built(parse_scenario_string(text, "<string>", strict)); },
          py::arg("text"), py::arg("strict") = false)
      .def_property_readonly("name", [](const PyScenario& s) { return s.sc.name; })
      .def_property_readonly("seed", [](const PyScenario& s) { return s.sc.seed; })
      .def_property_readonly("domain", [](const PyScenario& s) { return py::make_tuple(s.sc.lo, s.sc.hi); })
      .def_property_readonly("phi_names",
                             [](const PyScenario& s) {
                               std::vector<std::string> out;
                               for (const auto& p : s.sc.phi_specs) out.push_back(p.name);
                               return out;
                             })
      .def_property_readonly("jumps",
                             [](const PyScenario& s) {
                               py::list out;
                               for (const JumpPoint& j : s.sc.u->jumps())
                                 out.append(py::dict(py::arg("x") = j.x, py::arg("left") = j.left,
                                                     py::arg("right") = j.right));
                               return out;
                             })
      .def("u", [](const PyScenario& s, double x) { return s.sc.u->value(x); }, py::arg("x"))
      .def("to_toml", [](const PyScenario& s) { return to_toml(s.sc); })
      .def(
          "atom",
          [](const PyScenario& s, const std::string& variant, double lam, double x) {
            return s.measure(variant, lam).measure.atom(x);
          },
          py::arg("variant"), py::arg("lam"), py::arg("x"))
      .def(
          "pair",
          [](const PyScenario& s, const std::string& variant, double lam, const std::string& phi) {
            return measure_pair(s.measure(variant, lam).measure, s.sc.phi_named(phi), s.ctx().opt());
          },
          py::arg("variant"), py::arg("lam"), py::arg("phi"))
      .def(
          "weak_pair",
          [](const PyScenario& s, const std::string& variant, double lam, const std::string& phi) {
            return s.ctx().weak_pair(s.measure(variant, lam), s.sc.phi_named(phi));
          },
          py::arg("variant"), py::arg("lam"), py::arg("phi"))
      .def(
          "report_json",
          [](const PyScenario& s, std::vector<std::string> only, int jobs, double tol_scale) {
            RunOptions opt;
            opt.only = std::move(only);
            opt.jobs = jobs;
            opt.tol_scale = tol_scale;
            Report r;
            {
              py::gil_scoped_release release;
              r = run_report(s.sc, opt);
            }
            return dump_json(report_json(r));
          },
          py::arg("only") = std::vector<std::string>{}, py::arg("jobs") = 1, py::arg("tol_scale") = 1.0);
}
