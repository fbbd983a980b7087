#include <pybind11/complex.h>
#include <pybind11/pybind11.h>

#include "hyperct/errors.hpp"
#include "hyperct/hypergamma.hpp"
#include "hyperct/verifier.hpp"

namespace py = pybind11;
using namespace hyperct;

// Reports and configs cross the boundary as JSON text; the Python package
// converts them to dicts.
PYBIND11_MODULE(_hyperct, m) {
  m.doc() = "Numerical verification of hyperbolic and q-type constant term identities";
  py::register_exception<Error>(m, "HyperctError", PyExc_RuntimeError);

  m.def(
      "gamma",
      [](Complex omega_plus, Complex omega_minus, Complex z) {
        return gamma(QuasiPeriods(omega_plus, omega_minus), z).value;
      },
      py::arg("omega_plus"), py::arg("omega_minus"), py::arg("z"));

  m.def(
      "verify_json",
      [](const std::string& point) {
        const PointSpec p = point_from_json(nlohmann::json::parse(point));
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = run_point(p);
        }
        return dump_json(to_json(r));
      },
      py::arg("point"));

  m.def(
      "sweep_json",
      [](const std::string& config) {
        const auto points = parse_sweep_config(nlohmann::json::parse(config));
        std::vector<VerificationReport> reports;
        {
          py::gil_scoped_release release;
          reports = sweep(points);
        }
        return dump_reports(reports);
      },
      py::arg("config"));

  m.def("parse_complex", &parse_complex, py::arg("text"));
  m.def("format_complex", &format_complex, py::arg("z"));
}
