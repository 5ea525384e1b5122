#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pocmed/cli.hpp"

namespace {

using pocmed::ojson;

/// "1.5" -> [1.5]; "1,0,2" -> [1, 0, 2].
ojson parse_num_list(const std::string& text, const std::string& what) {
  ojson arr = ojson::array();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      arr.push_back(v);
    } catch (const std::exception&) {
      throw pocmed::ConfigError(what + ": cannot parse \"" + tok +
                                "\" as a number");
    }
    pos = comma + 1;
  }
  return arr;
}

/// lo,hi[,closed|half]; "inf"/"-inf" or an empty token leaves a bound open.
void apply_evidence_flag(ojson& query, const std::string& text) {
  std::vector<std::string> toks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    toks.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (toks.size() < 2 || toks.size() > 3) {
    throw pocmed::ConfigError(
        "--evidence expects lo,hi[,closed|half], got \"" + text + "\"");
  }
  ojson ev = ojson::object();
  if (query.contains("evidence") && query["evidence"].is_object()) {
    ev = query["evidence"];
  }
  auto bound = [&](const std::string& tok) -> ojson {
    if (tok.empty() || tok == "inf" || tok == "+inf" || tok == "-inf") {
      return nullptr;
    }
    return parse_num_list(tok, "--evidence")[0];
  };
  ev["lo"] = bound(toks[0]);
  ev["hi"] = bound(toks[1]);
  std::string closure = toks.size() == 3 ? toks[2] : "half";
  if (closure == "half" || closure == "half-open" || closure == "half_open") {
    closure = "half_open";
  } else if (closure != "closed") {
    throw pocmed::ConfigError("--evidence closure must be closed or half");
  }
  ev["closure"] = closure;
  query["evidence"] = ev;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Path-specific probabilities of necessity and sufficiency for "
      "treatments acting through two (or three) ordered mediators"};
  app.require_subcommand(1);

  std::string config_path, x, x0, c, xe, evidence, format, out;
  double y = 0.0;
  std::uint64_t seed = 0;
  std::size_t boot = 1000, mc = 0;
  bool diagnostics = false;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"analytic", "closed-form decomposition of a known model"},
      {"estimate", "fit regressions to a CSV and decompose (plus bootstrap)"},
      {"simulate", "draw an observational dataset from a known model"},
      {"oracle", "ground-truth decomposition by joint counterfactual draws"},
      {"tri-oracle", "eight-path ground truth for the three-mediator model"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--x", x, "treatment value(s), comma-separated");
    sub->add_option("--x0", x0, "baseline treatment value(s)");
    sub->add_option("--y", y, "outcome threshold");
    sub->add_option("--c", c, "covariate value(s)");
    sub->add_option("--evidence", evidence,
                    "post-treatment interval lo,hi[,closed|half]");
    sub->add_option("--xe", xe, "evidence treatment value(s)");
    sub->add_option("--boot", boot, "bootstrap resamples (enables CIs)");
    sub->add_option("--seed", seed, "seed for oracle/bootstrap/simulate");
    sub->add_option("--mc", mc, "Monte Carlo draws / simulated rows");
    sub->add_option("--format", format, "output format: text|json|csv");
    sub->add_flag("--diagnostics", diagnostics,
                  "include raw gamma/delta values in the report");
    sub->add_option("--out", out, "output CSV path (simulate)");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    pocmed::RunConfig cfg = pocmed::load_config_file(config_path);
    cfg.command = sub->get_name();

    if (sub->count("--x")) cfg.query_json["x"] = parse_num_list(x, "--x");
    if (sub->count("--x0")) cfg.query_json["x0"] = parse_num_list(x0, "--x0");
    if (sub->count("--y")) cfg.query_json["y"] = y;
    if (sub->count("--c")) cfg.query_json["c"] = parse_num_list(c, "--c");
    if (sub->count("--evidence")) apply_evidence_flag(cfg.query_json, evidence);
    if (sub->count("--xe")) {
      if (!cfg.query_json.contains("evidence") ||
          !cfg.query_json["evidence"].is_object()) {
        cfg.query_json["evidence"] = ojson::object();
      }
      cfg.query_json["evidence"]["x_e"] = parse_num_list(xe, "--xe");
    }
    if (sub->count("--boot")) {
      cfg.with_bootstrap = true;
      cfg.bootstrap.resamples = boot;
    }
    if (sub->count("--seed")) {
      cfg.mc_seed = seed;
      cfg.sim_seed = seed;
      cfg.bootstrap.seed = seed;
    }
    if (sub->count("--mc")) {
      cfg.mc_n = mc;
      cfg.sim_n = mc;
    }
    if (sub->count("--format")) cfg.format = format;
    if (sub->count("--diagnostics")) cfg.diagnostics = true;
    if (sub->count("--out")) cfg.sim_out = out;

    const pocmed::Report report = pocmed::run_config(cfg);
    std::cout << pocmed::render_report(report, cfg.format);
    return 0;
  } catch (const pocmed::Error& e) {
    std::cerr << pocmed::error_json(e.code(), e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << pocmed::error_json("InternalError", e.what()) << "\n";
    return 1;
  }
}
