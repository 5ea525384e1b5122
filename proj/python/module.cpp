#include <pybind11/pybind11.h>

#include <exception>

#include "pocmed/cli.hpp"

namespace py = pybind11;

PYBIND11_MODULE(pocmed, m) {
  m.doc() =
      "Path-specific probabilities of necessity and sufficiency for "
      "treatments acting through ordered mediators. run(command, "
      "config_json) executes one analysis and returns the report as a JSON "
      "string.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const pocmed::Error& e) {
      PyErr_SetString(PyExc_RuntimeError,
                      (e.code() + ": " + std::string(e.what())).c_str());
    }
  });

  m.attr("SCHEMA_VERSION") = pocmed::kSchemaVersion;

  m.def("run", &pocmed::run_json, py::arg("command"), py::arg("config"),
        "Run one analysis. `command` is analytic, estimate, simulate, "
        "oracle, or tri-oracle (empty string defers to the config's "
        "\"command\" key); `config` is a JSON document with schema "
        "\"poc-mediate/v1\". Returns the report as a JSON string with keys "
        "query, method, components, gammas, delta, ci, assumptions, meta.");

  m.def(
      "render",
      [](const std::string& command, const std::string& config_text,
         const std::string& format) {
        pocmed::RunConfig cfg = pocmed::config_from_json(
            pocmed::parse_json_text(config_text, "config"));
        if (!command.empty()) cfg.command = command;
        return pocmed::render_report(pocmed::run_config(cfg), format);
      },
      py::arg("command"), py::arg("config"), py::arg("format") = "text",
      "Like run(), but returns the rendered text/json/csv report.");
}
