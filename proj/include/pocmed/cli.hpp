#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pocmed/csv.hpp"
#include "pocmed/estimate.hpp"
#include "pocmed/json_io.hpp"

namespace pocmed {

/// One run, fully described: command, model, query, data sources, sampling
/// and bootstrap settings, output preferences. Serializable as a single JSON
/// document (schema "poc-mediate/v1"); command-line flags override scalars.
struct RunConfig {
  std::string command;  // analytic | estimate | simulate | oracle | tri-oracle

  std::optional<LinearScmSpec> spec;
  std::optional<TriScmSpec> tri_spec;
  ojson query_json = ojson::object();  // finalized once model dims are known

  // data (estimate)
  std::string csv_path;
  RoleMap roles;
  EncodingMap encoding;
  char delimiter = 0;  // 0 = auto-detect ',' vs ';'

  // Monte Carlo (oracle / tri-oracle)
  std::size_t mc_n = 1000000;
  std::uint64_t mc_seed = 0;

  // bootstrap (estimate); CIs are computed only when enabled
  bool with_bootstrap = false;
  BootstrapConfig bootstrap;

  // simulate
  std::size_t sim_n = 1000;
  std::uint64_t sim_seed = 0;
  std::string sim_out = "simulated.csv";

  // output
  std::string format = "text";  // text | json | csv
  bool diagnostics = false;     // attach raw gamma/delta values
};

/// Parses a config document (schema-checked). The optional "command" key
/// provides the command when the caller does not.
RunConfig config_from_json(const ojson& doc);
RunConfig load_config_file(const std::string& path);

/// Executes the configured command and captures the results plus wall time.
Report run_config(const RunConfig& config);

/// Renders in the requested format ("text", "json", or "csv").
std::string render_report(const Report& report, const std::string& format);

/// {"error": {"code": ..., "message": ...}} on one line.
std::string error_json(const std::string& code, const std::string& message);

/// Embedding entry point: parse `config_text`, override its command when
/// `command` is non-empty, run, and return the report as a JSON string.
std::string run_json(const std::string& command,
                     const std::string& config_text);

}  // namespace pocmed
