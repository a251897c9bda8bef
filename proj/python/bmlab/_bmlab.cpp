#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmlab/covers.hpp"
#include "bmlab/examples.hpp"
#include "bmlab/explorer.hpp"
#include "bmlab/manifest.hpp"
#include "bmlab/metrics.hpp"
#include "bmlab/scene.hpp"

namespace py = pybind11;
using namespace bmlab;

// Rationals cross the boundary as "p/q" strings and results as JSON text;
// the Python side decodes them.

namespace {

std::string report_scene(const std::string& scene_text, const std::string& t, const std::string& tau,
                         const std::string& threshold) {
  const Scene s = parse_scene(scene_text);
  Rational tt;
  if (!t.empty()) tt = parse_rational(t);
  else if (s.t) tt = *s.t;
  else fail_input("t is required (the scene has no \"t\")");
  const Rational ta = tau.empty() ? tt : parse_rational(tau);
  const StabilityReport r = stability_report(evaluate(s), tt, ta, parse_rational(threshold));
  nlohmann::json out = {{"scene", s.name}, {"report", to_json(r)}};
  if (!s.expected.empty()) out["expected"] = to_json(verify_expected(s.expected, r, frac(5, 100)));
  return out.dump();
}

std::string example(const std::string& name, std::size_t n, const std::string& param, const std::string& t,
                    const std::string& h, const std::string& rel_tol) {
  if (name != "constant" && name != "exponent") fail_input("example name must be constant or exponent");
  auto [scene, a] = name == "constant"
                        ? build_constant_example(n, parse_rational(param), parse_rational(h))
                        : build_exponent_example(n, parse_rational(param), parse_rational(t), parse_rational(h));
  nlohmann::json out = to_json(verify_scene(scene, a, parse_rational(rel_tol)));
  out["scene"] = to_json(to_scene(scene));
  return out.dump();
}

std::string explore(unsigned m, const std::string& eta0, std::size_t budget, std::size_t lns_iterations,
                    std::uint64_t seed) {
  CoverSearchProblem p;
  p.m = m;
  p.eta0 = parse_rational(eta0);
  p.budget = budget;
  p.lns_iterations = lns_iterations;
  return to_json(local_improve(greedy_cover(p), p, seed)).dump();
}

std::string audit(std::size_t n, const std::string& t, const std::string& tau) {
  const AuditLine l = constant_audit(n, parse_rational(t), parse_rational(tau));
  return nlohmann::json{{"name", l.name}, {"holds", l.holds}, {"lhs", l.lhs}, {"rhs", l.rhs}}.dump();
}

}  // namespace

PYBIND11_MODULE(_bmlab, m) {
  m.doc() = "Exact stability measurements for interpolated sumsets";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error(m, "BmlabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def("normalize_rational", [](const std::string& s) { return to_string(parse_rational(s)); });
  m.def("report_scene", &report_scene, py::arg("scene_json"), py::arg("t") = "", py::arg("tau") = "",
        py::arg("threshold") = "1/100");
  m.def("example", &example, py::arg("name"), py::arg("n"), py::arg("param"), py::arg("t") = "1/4",
        py::arg("h") = "1/64", py::arg("rel_tol") = "5/100");
  m.def("explore", &explore, py::arg("m"), py::arg("eta0"), py::arg("budget") = 256,
        py::arg("lns_iterations") = 200, py::arg("seed") = 1);
  m.def("constant_audit", &audit, py::arg("n"), py::arg("t"), py::arg("tau"));
}
