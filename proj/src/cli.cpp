#include "pocmed/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "pocmed/identify.hpp"
#include "pocmed/simulate.hpp"
#include "pocmed/trimediator.hpp"

namespace pocmed {

namespace {

using jsonu::find;
using jsonu::flag;
using jsonu::num;
using jsonu::str;
using jsonu::str_list;

char delimiter_from_config(const ojson& data) {
  const std::string d = str(data, "delimiter", "auto", "data");
  if (d == "auto") return 0;
  if (d.size() != 1) {
    throw ConfigError("data.delimiter must be a single character or \"auto\"");
  }
  return d[0];
}

RoleMap roles_from_json(const ojson& j) {
  RoleMap roles;
  roles.x = str_list(j, "x", "roles");
  const std::vector<std::string> m = str_list(j, "m", "roles");
  const std::vector<std::string> n = str_list(j, "n", "roles");
  const std::vector<std::string> y = str_list(j, "y", "roles");
  if (m.size() != 1 || n.size() != 1 || y.size() != 1) {
    throw ConfigError("roles.m, roles.n, roles.y must each name one column");
  }
  roles.m = m[0];
  roles.n = n[0];
  roles.y = y[0];
  roles.c = str_list(j, "c", "roles");
  return roles;
}

EncodingMap encoding_from_json(const ojson& j) {
  EncodingMap enc;
  if (!j.is_object()) {
    throw ConfigError("data.encoding must be an object of column maps");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_object()) {
      throw ConfigError("data.encoding." + it.key() +
                        " must map cell strings to numbers");
    }
    std::map<std::string, double>& col = enc[it.key()];
    for (auto vit = it.value().begin(); vit != it.value().end(); ++vit) {
      if (!vit.value().is_number()) {
        throw ConfigError("data.encoding." + it.key() + "." + vit.key() +
                          " must be a number");
      }
      col[vit.key()] = vit.value().get<double>();
    }
  }
  return enc;
}

std::uint64_t uint_at(const ojson& j, const char* key, std::uint64_t dflt,
                      const std::string& ctx) {
  const double v = num(j, key, static_cast<double>(dflt), ctx);
  if (v < 0) throw ConfigError(ctx + "." + key + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

RunConfig config_from_json(const ojson& doc) {
  require_schema(doc);
  RunConfig cfg;
  cfg.command = str(doc, "command", "", "config");

  if (const ojson* spec = find(doc, "spec")) {
    cfg.spec = linear_spec_from_json(*spec);
  }
  if (const ojson* tri = find(doc, "tri_spec")) {
    cfg.tri_spec = tri_spec_from_json(*tri);
  }
  if (const ojson* q = find(doc, "query")) {
    if (!q->is_object()) throw ConfigError("query must be a JSON object");
    cfg.query_json = *q;
  }

  if (const ojson* mc = find(doc, "mc")) {
    cfg.mc_n = static_cast<std::size_t>(uint_at(*mc, "n", cfg.mc_n, "mc"));
    cfg.mc_seed = uint_at(*mc, "seed", cfg.mc_seed, "mc");
  }

  if (const ojson* boot = find(doc, "bootstrap")) {
    cfg.with_bootstrap = true;
    std::uint64_t b = uint_at(*boot, "B", 0, "bootstrap");
    if (b == 0) b = uint_at(*boot, "resamples", cfg.bootstrap.resamples,
                            "bootstrap");
    cfg.bootstrap.resamples = static_cast<std::size_t>(b);
    cfg.bootstrap.level = num(*boot, "level", cfg.bootstrap.level, "bootstrap");
    cfg.bootstrap.seed = uint_at(*boot, "seed", cfg.bootstrap.seed,
                                 "bootstrap");
    if (!(cfg.bootstrap.level > 0.0 && cfg.bootstrap.level < 1.0)) {
      throw ConfigError("bootstrap.level must lie in (0, 1)");
    }
    if (cfg.bootstrap.resamples < 1) {
      throw ConfigError("bootstrap needs at least 1 resample");
    }
  }

  if (const ojson* data = find(doc, "data")) {
    cfg.csv_path = str(*data, "csv", "", "data");
    if (const ojson* roles = find(*data, "roles")) {
      cfg.roles = roles_from_json(*roles);
    }
    if (const ojson* enc = find(*data, "encoding")) {
      cfg.encoding = encoding_from_json(*enc);
    }
    cfg.delimiter = delimiter_from_config(*data);
  }

  if (const ojson* sim = find(doc, "simulate")) {
    cfg.sim_n = static_cast<std::size_t>(uint_at(*sim, "n", cfg.sim_n,
                                                 "simulate"));
    cfg.sim_seed = uint_at(*sim, "seed", cfg.sim_seed, "simulate");
    cfg.sim_out = str(*sim, "out", cfg.sim_out.c_str(), "simulate");
  }

  if (const ojson* out = find(doc, "output")) {
    cfg.format = str(*out, "format", cfg.format.c_str(), "output");
    cfg.diagnostics = flag(*out, "diagnostics", cfg.diagnostics, "output");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(parse_json_text(buf.str(), "config file " + path));
}

namespace {

void fill_decomposition(Report& r, const PnsDecomposition& dec,
                        bool diagnostics, double ci_level) {
  r.components = dec.point;
  if (dec.ci_lo && dec.ci_hi) {
    r.ci = std::make_pair(*dec.ci_lo, *dec.ci_hi);
    r.ci_level = ci_level;
  }
  if (diagnostics && dec.diagnostics) r.diagnostics = dec.diagnostics;
  r.theta_monotone = dec.theta_monotone;
  r.point_evidence = dec.point_evidence;
  r.acceptance_rate = dec.acceptance_rate;
}

}  // namespace

Report run_config(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.method = cfg.command;

  if (cfg.command == "analytic" || cfg.command == "oracle") {
    if (!cfg.spec) {
      throw ConfigError(cfg.command + " requires a \"spec\" block");
    }
    const PnsQuery q = validate_query(
        *cfg.spec,
        query_from_json(cfg.query_json, cfg.spec->dim_x, cfg.spec->dim_c));
    r.query = q;
    if (cfg.command == "analytic") {
      fill_decomposition(r, decompose_analytic(*cfg.spec, q), cfg.diagnostics,
                         0.0);
    } else {
      fill_decomposition(r, oracle_decompose(*cfg.spec, q, cfg.mc_n,
                                             cfg.mc_seed),
                         cfg.diagnostics, 0.0);
      r.seed = cfg.mc_seed;
      r.n = cfg.mc_n;
    }
  } else if (cfg.command == "tri-oracle") {
    if (!cfg.tri_spec) {
      throw ConfigError("tri-oracle requires a \"tri_spec\" block");
    }
    const PnsQuery q = validate_query_dims(
        cfg.tri_spec->dim_x, cfg.tri_spec->dim_c,
        query_from_json(cfg.query_json, cfg.tri_spec->dim_x,
                        cfg.tri_spec->dim_c));
    r.query = q;
    r.tri = tri_oracle_decompose(*cfg.tri_spec, q, cfg.mc_n, cfg.mc_seed);
    r.acceptance_rate = r.tri->acceptance_rate;
    r.seed = cfg.mc_seed;
    r.n = cfg.mc_n;
  } else if (cfg.command == "simulate") {
    if (!cfg.spec) throw ConfigError("simulate requires a \"spec\" block");
    const Dataset ds = sample_dataset(*cfg.spec, cfg.sim_n, cfg.sim_seed);
    write_dataset_csv(ds, cfg.sim_out);
    r.dataset_path = cfg.sim_out;
    r.dataset_columns = ds.columns;
    r.seed = cfg.sim_seed;
    r.n = ds.n_rows;
  } else if (cfg.command == "estimate") {
    if (cfg.csv_path.empty()) {
      throw ConfigError("estimate requires data.csv naming the input file");
    }
    const IngestResult ing =
        ingest_csv_file(cfg.csv_path, cfg.roles, cfg.encoding, cfg.delimiter);
    const PnsQuery q = validate_query_dims(
        static_cast<int>(cfg.roles.x.size()),
        static_cast<int>(cfg.roles.c.size()),
        query_from_json(cfg.query_json, static_cast<int>(cfg.roles.x.size()),
                        static_cast<int>(cfg.roles.c.size())));
    r.query = q;
    const PnsDecomposition dec =
        cfg.with_bootstrap ? bootstrap_ci(ing.data, q, cfg.bootstrap)
                           : estimate_decomposition(ing.data, q);
    fill_decomposition(r, dec, cfg.diagnostics, cfg.bootstrap.level);
    r.dropped_rows = ing.dropped_rows;
    r.n = ing.data.n_rows;
    r.seed = cfg.with_bootstrap ? cfg.bootstrap.seed : 0;
  } else if (cfg.command.empty()) {
    throw ConfigError("no command given (config \"command\" key or CLI "
                      "subcommand)");
  } else {
    throw ConfigError("unknown command \"" + cfg.command +
                      "\" (expected analytic, estimate, simulate, oracle, or "
                      "tri-oracle)");
  }

  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

std::string render_report(const Report& report, const std::string& format) {
  if (format == "text") return render_text(report);
  if (format == "json") return dump_report(report);
  if (format == "csv") return render_csv(report);
  throw ConfigError("output.format must be text, json, or csv; got \"" +
                    format + "\"");
}

std::string error_json(const std::string& code, const std::string& message) {
  ojson j;
  j["error"] = {{"code", code}, {"message", message}};
  return j.dump();
}

std::string run_json(const std::string& command,
                     const std::string& config_text) {
  RunConfig cfg = config_from_json(parse_json_text(config_text, "config"));
  if (!command.empty()) cfg.command = command;
  return dump_report(run_config(cfg));
}

}  // namespace pocmed
