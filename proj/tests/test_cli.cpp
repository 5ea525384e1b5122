#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "pocmed/cli.hpp"

using namespace pocmed;

namespace {

const char* kAnalyticConfig = R"json({
  "schema": "poc-mediate/v1",
  "spec": {
    "model": "two-mediator",
    "mediator_m": {"x": [1]},
    "mediator_n": {"x": [1], "m": 1},
    "outcome": {"x": [1], "m": 1, "n": 1}
  },
  "query": {"x": [1], "x0": [0], "y": 0}
})json";

ojson parse(const std::string& text) {
  return parse_json_text(text, "test json");
}

ojson run_parsed(const std::string& command, const std::string& config) {
  return parse(run_json(command, config));
}

}  // namespace

TEST_CASE("analytic run through the embedding entry point") {
  const ojson r = run_parsed("analytic", kAnalyticConfig);
  CHECK(r.at("method") == "analytic");
  const ojson& comp = r.at("components");
  CHECK(std::abs(comp.at("t_pns").get<double>() - 0.4487647825701253) <
        1e-12);
  CHECK(std::abs(comp.at("nd_pns").get<double>() - 0.15587287169138783) <
        1e-12);
  CHECK(std::abs(comp.at("ni_pns").get<double>() - 0.29289191087873745) <
        1e-12);
  CHECK(std::abs(comp.at("pns_xy").get<double>() - 0.05910046353004869) <
        1e-12);
  CHECK(std::abs(comp.at("pns_xny").get<double>() - 0.09677240816133914) <
        1e-12);
  CHECK(std::abs(comp.at("pns_xmny").get<double>() - 0.1344376100335418) <
        1e-12);
  CHECK(std::abs(comp.at("pns_xmy").get<double>() - 0.15845430084519568) <
        1e-12);

  CHECK(r.at("gammas").is_null());  // diagnostics not requested
  CHECK(r.at("delta").is_null());
  CHECK(r.at("ci").is_null());
  CHECK(r.at("assumptions").at("theta_monotone") == true);
  CHECK(r.at("assumptions").at("point_evidence") == false);
  CHECK(r.at("meta").contains("seed"));
  CHECK(r.at("meta").contains("n"));
  CHECK(r.at("meta").contains("runtime_ms"));
  CHECK(r.at("query").at("x") == ojson({1.0}));
  CHECK(r.at("query").at("x0") == ojson({0.0}));
}

TEST_CASE("diagnostics attach the raw gamma and delta values") {
  ojson cfg = parse(kAnalyticConfig);
  cfg["output"] = {{"format", "json"}, {"diagnostics", true}};
  const ojson r = run_parsed("analytic", cfg.dump());
  REQUIRE(r.at("gammas").is_array());
  REQUIRE(r.at("gammas").size() == 4);
  CHECK(std::abs(r.at("gammas")[0].get<double>() - 0.05910046353004869) <
        1e-12);
  CHECK(r.at("delta").get<double>() == 1.0);
}

TEST_CASE("reports are byte-identical across runs up to wall time") {
  ojson a = run_parsed("analytic", kAnalyticConfig);
  ojson b = run_parsed("analytic", kAnalyticConfig);
  a["meta"]["runtime_ms"] = 0;
  b["meta"]["runtime_ms"] = 0;
  CHECK(a.dump(2) == b.dump(2));
}

TEST_CASE("oracle run records its seed and draw count") {
  ojson cfg = parse(kAnalyticConfig);
  cfg["mc"] = {{"n", 50000}, {"seed", 3}};
  const ojson r = run_parsed("oracle", cfg.dump());
  CHECK(r.at("method") == "oracle");
  CHECK(r.at("meta").at("seed") == 3);
  CHECK(r.at("meta").at("n") == 50000);
  CHECK(std::abs(r.at("components").at("t_pns").get<double>() -
                 0.4487647825701253) < 0.01);
  CHECK(r.at("assumptions").at("acceptance_rate") == 1.0);
}

TEST_CASE("three-mediator oracle reports eight paths and four aggregates") {
  const char* cfg = R"json({
    "schema": "poc-mediate/v1",
    "tri_spec": {
      "mediator_m1": {"x": [1]},
      "mediator_m2": {"x": [1], "m1": 1},
      "mediator_m3": {"x": [1], "m1": 1, "m2": 1},
      "outcome": {"x": [1], "m1": 1, "m2": 1, "m3": 1}
    },
    "query": {"x": [1], "x0": [0], "y": 0},
    "mc": {"n": 100000, "seed": 1}
  })json";
  const ojson r = run_parsed("tri-oracle", cfg);
  CHECK(r.at("method") == "tri-oracle");
  const ojson& comp = r.at("components");
  for (const char* key :
       {"t_pns", "nd_pns", "ni_pns", "pns_xy", "pns_xm3y", "pns_xm2y",
        "pns_xm2m3y", "pns_xm1m2y", "pns_xm1m2m3y", "pns_xm1y", "pns_xm1m3y",
        "agg_xy", "agg_xny", "agg_xmny", "agg_xmy"}) {
    CHECK(comp.contains(key));
  }
  CHECK(std::abs(comp.at("t_pns").get<double>() - 0.4559592441689048) < 0.01);
}

TEST_CASE("simulate followed by estimate round-trips through a csv file") {
  const std::string path = "tmp_cli_roundtrip.csv";
  ojson sim = parse(kAnalyticConfig);
  sim["simulate"] = {{"n", 4000}, {"seed", 3}, {"out", path}};
  const ojson sr = run_parsed("simulate", sim.dump());
  CHECK(sr.at("method") == "simulate");
  CHECK(sr.at("dataset").at("path") == path);
  CHECK(sr.at("dataset").at("rows") == 4000);
  CHECK(sr.at("components").is_null());

  ojson est = ojson::object();
  est["schema"] = "poc-mediate/v1";
  est["query"] = {{"x", {1}}, {"x0", {0}}, {"y", 0}};
  est["data"] = {
      {"csv", path},
      {"roles",
       {{"x", {"x1"}}, {"m", "m"}, {"n", "n"}, {"y", "y"}}}};
  est["bootstrap"] = {{"B", 16}, {"level", 0.9}, {"seed", 5}};
  const ojson er = run_parsed("estimate", est.dump());
  CHECK(er.at("method") == "estimate");
  const double t = er.at("components").at("t_pns").get<double>();
  CHECK(std::abs(t - 0.4487647825701253) < 0.1);
  REQUIRE(er.at("ci").is_object());
  CHECK(er.at("ci").at("level") == 0.9);
  const ojson& ti = er.at("ci").at("t_pns");
  REQUIRE(ti.size() == 2);
  CHECK(ti[0].get<double>() <= t + 1e-12);
  CHECK(t <= ti[1].get<double>() + 1e-12);
  CHECK(er.at("meta").at("n") == 4000);

  std::remove(path.c_str());
}

TEST_CASE("text and csv renderings carry the headline numbers") {
  RunConfig cfg = config_from_json(parse(kAnalyticConfig));
  cfg.command = "analytic";
  const Report rep = run_config(cfg);

  const std::string text = render_report(rep, "text");
  CHECK(text.find("method: analytic") != std::string::npos);
  CHECK(text.find("t_pns") != std::string::npos);
  CHECK(text.find("44.876%") != std::string::npos);
  CHECK(text.find("pns_xmny") != std::string::npos);
  CHECK(text.find("13.444%") != std::string::npos);

  const std::string csv = render_report(rep, "csv");
  CHECK(csv.rfind("component,estimate,ci_low,ci_high", 0) == 0);
  CHECK(csv.find("\npns_xmy,") != std::string::npos);

  CHECK_THROWS_AS(render_report(rep, "yaml"), ConfigError);
}

TEST_CASE("config parsing rejects malformed documents") {
  CHECK_THROWS_AS(config_from_json(parse("{}")), ConfigError);
  CHECK_THROWS_AS(parse_json_text("{not json", "test json"), ConfigError);

  ojson bad_level = parse(kAnalyticConfig);
  bad_level["bootstrap"] = {{"B", 10}, {"level", 1.5}};
  CHECK_THROWS_AS(config_from_json(bad_level), ConfigError);

  // unknown command
  CHECK_THROWS_AS(run_json("transmogrify", kAnalyticConfig), ConfigError);

  // estimate requires a data block
  CHECK_THROWS_AS(run_json("estimate", kAnalyticConfig), ConfigError);

  // analytic requires a spec
  const char* no_spec = R"json({
    "schema": "poc-mediate/v1",
    "query": {"x": [1], "x0": [0], "y": 0}
  })json";
  CHECK_THROWS_AS(run_json("analytic", no_spec), ConfigError);
}

TEST_CASE("model specs survive a json round trip") {
  const LinearScmSpec spec = testutil::logistic_spec();
  const LinearScmSpec back = linear_spec_from_json(linear_spec_to_json(spec));
  CHECK(back.a1 == spec.a1);
  CHECK(back.a2 == spec.a2);
  CHECK(back.a4 == spec.a4);
  CHECK(back.b3 == spec.b3);
  CHECK(back.g2 == spec.g2);
  CHECK(back.dim_x == spec.dim_x);
  CHECK(back.dim_c == spec.dim_c);
  CHECK(back.link == OutcomeLink::logistic);
  CHECK(back.logistic_scale == spec.logistic_scale);

  const TriScmSpec tri = testutil::tri_all_ones();
  const TriScmSpec tback = tri_spec_from_json(tri_spec_to_json(tri));
  CHECK(tback.p1 == tri.p1);
  CHECK(tback.q2 == tri.q2);
  CHECK(tback.d3 == tri.d3);
  CHECK(tback.a4 == tri.a4);
  CHECK(tback.sigma_m3 == tri.sigma_m3);
}

TEST_CASE("queries with evidence survive a json round trip") {
  PnsQuery q = testutil::unit_query();
  q.evidence.empty = false;
  q.evidence.x_e = {0.0};
  q.evidence.y_lo = 0.0;
  q.evidence.y_hi = 1.5;
  q.evidence.closed = true;

  const PnsQuery back = query_from_json(query_to_json(q), 1, 0);
  CHECK_FALSE(back.evidence.empty);
  CHECK(back.evidence.x_e == Vec{0.0});
  CHECK(back.evidence.y_lo == 0.0);
  CHECK(back.evidence.y_hi == 1.5);
  CHECK(back.evidence.closed);

  // infinite bounds render as nulls and come back infinite
  q.evidence.y_hi = kInf;
  const PnsQuery inf_back = query_from_json(query_to_json(q), 1, 0);
  CHECK(inf_back.evidence.y_hi == kInf);
}

TEST_CASE("error payloads are machine-readable one-liners") {
  const std::string payload = error_json("ConfigError", "boom");
  const ojson e = parse(payload);
  CHECK(e.at("error").at("code") == "ConfigError");
  CHECK(e.at("error").at("message") == "boom");
  CHECK(payload.find('\n') == std::string::npos);  // single line
}
