#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "shmc/cli/config.hpp"
#include "shmc/cli/presets.hpp"
#include "shmc/cli/runner.hpp"
#include "shmc/diagnostics/references.hpp"
#include "shmc/version.hpp"

namespace py = pybind11;

// Configs and manifests cross the boundary as JSON text; the python package
// turns them into dicts. Heavy work runs without the GIL.
PYBIND11_MODULE(_core, m) {
  m.doc() = "sampling experiments: splitting and random-batch Hamiltonian Monte Carlo";

  py::register_exception<shmc::cli::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<shmc::cli::RunError>(m, "RunError", PyExc_RuntimeError);

  m.def("version", &shmc::version, "library version string");

  m.def("preset_ids", [] {
    std::vector<std::string> out;
    for (const auto& p : shmc::cli::preset_list()) out.push_back(p.id);
    return out;
  });

  m.def("preset_config_text",
        [](const std::string& id) { return shmc::cli::preset_config(id).dump(2); },
        py::arg("preset_id"));

  m.def("validate_config_text",
        [](const std::string& text) {
          return shmc::cli::to_json(shmc::cli::parse_config_text(text)).dump(2);
        },
        py::arg("config_text"), "parse + validate; returns the resolved config as JSON text");

  m.def("run_config_text",
        [](const std::string& text) {
          const auto cfg = shmc::cli::parse_config_text(text);
          const auto out = shmc::cli::run_experiment(cfg);
          return out.manifest.dump(2);
        },
        py::arg("config_text"), py::call_guard<py::gil_scoped_release>(),
        "execute an experiment config; returns the manifest as JSON text");

  m.def("compare_manifests",
        [](const std::string& a, const std::string& b) {
          return shmc::cli::compare_runs(a, b).report;
        },
        py::arg("manifest_a"), py::arg("manifest_b"));

  m.def("semicircle_bin_mass", &shmc::semicircle_bin_mass, py::arg("lo"), py::arg("hi"),
        py::arg("n_bins"), "per-bin masses of the semicircle equilibrium law");
}
