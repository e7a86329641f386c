#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "uftlqr/contour.hpp"
#include "uftlqr/errors.hpp"
#include "uftlqr/fd.hpp"
#include "uftlqr/scenario.hpp"
#include "uftlqr/series.hpp"
#include "uftlqr/verify.hpp"

namespace py = pybind11;
using namespace uftlqr;

namespace {

// JSON crosses the boundary as text; the Python side wraps json.loads/dumps.
Scenario scenario_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("", e.what());
  }
  return parse_scenario(j);
}

}  // namespace

PYBIND11_MODULE(_uftlqr, m) {
  m.doc() = "Unified-transform LQR for 1D reaction-diffusion";

  py::register_exception<Error>(m, "UftlqrError");

  m.def("run_json", [](const std::string& config, const std::string& out_dir) {
        const Scenario s = scenario_from_text(config);
        return run_scenario(s, out_dir.empty() ? s.out_dir : out_dir).dump();
      },
      py::arg("config"), py::arg("out_dir") = "");

  m.def("normalize_config", [](const std::string& config) {
    return serialize_scenario(scenario_from_text(config)).dump();
  });

  m.def("contour_point", [](double c, double L, double mode, double x, double t) {
        const ContourPoint pt =
            ContourEvaluator(Problem::make(c, L, SpatialProfile::sine(L, 1.0, mode)), QuadratureSpec{}).eval(x, t);
        return py::make_tuple(pt.control, pt.state);
      },
      py::arg("c"), py::arg("L"), py::arg("mode"), py::arg("x"), py::arg("t"),
      "Control and state for phi0 = sin(mode pi x / L) with zero boundary data.");

  m.def("series_control", [](double c, double L, double mode, double x, double t, int M) {
        return series_control_eval(make_series(Problem::make(c, L, SpatialProfile::sine(L, 1.0, mode)), M), x, t);
      },
      py::arg("c"), py::arg("L"), py::arg("mode"), py::arg("x"), py::arg("t"), py::arg("M") = 40);

  m.def("kernel_matrix", [](double c, double L, int M, int n) {
        const KernelMatrix km = build_kernel_matrix(Dispersion::reaction_diffusion(c), L, M, n);
        return py::make_tuple(km.x, km.toeplitz, km.hankel, km.combined);
      },
      py::arg("c"), py::arg("L"), py::arg("M"), py::arg("n"));

  m.def("fd_gain", [](double c, double L, int N) {
        const GridModel g = discretize(c, L, N);
        const CareSolution s = solve_care(g);
        return py::make_tuple(g.x, s.K, s.residual);
      },
      py::arg("c"), py::arg("L"), py::arg("N"));

  m.def("verify", [](bool full) {
        py::list out;
        for (const ProbeResult& r : verify_suite(VerifyOptions{full, {}}))
          out.append(py::make_tuple(r.name, r.pass, r.detail));
        return out;
      },
      py::arg("full") = false);
}
