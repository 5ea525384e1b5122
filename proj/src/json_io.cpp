#include "pocmed/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace pocmed {

const char* kSchemaVersion = "poc-mediate/v1";

namespace {
[[noreturn]] void cfg_fail(const std::string& msg) { throw ConfigError(msg); }
}  // namespace

namespace jsonu {

const ojson* find(const ojson& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double num(const ojson& j, const char* key, double dflt,
           const std::string& ctx) {
  const ojson* v = find(j, key);
  if (!v) return dflt;
  if (!v->is_number()) cfg_fail(ctx + "." + key + " must be a number");
  return v->get<double>();
}

double req_num(const ojson& j, const char* key, const std::string& ctx) {
  const ojson* v = find(j, key);
  if (!v) cfg_fail(ctx + "." + key + " is required");
  if (!v->is_number()) cfg_fail(ctx + "." + key + " must be a number");
  return v->get<double>();
}

Vec vec(const ojson& j, const char* key, const std::string& ctx) {
  const ojson* v = find(j, key);
  if (!v) return {};
  if (v->is_number()) return {v->get<double>()};
  if (!v->is_array()) cfg_fail(ctx + "." + key + " must be a number or array");
  Vec out;
  out.reserve(v->size());
  for (const auto& e : *v) {
    if (!e.is_number()) cfg_fail(ctx + "." + key + " has a non-numeric entry");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string str(const ojson& j, const char* key, const char* dflt,
                const std::string& ctx) {
  const ojson* v = find(j, key);
  if (!v) return dflt;
  if (!v->is_string()) cfg_fail(ctx + "." + key + " must be a string");
  return v->get<std::string>();
}

bool flag(const ojson& j, const char* key, bool dflt, const std::string& ctx) {
  const ojson* v = find(j, key);
  if (!v) return dflt;
  if (!v->is_boolean()) cfg_fail(ctx + "." + key + " must be a boolean");
  return v->get<bool>();
}

std::vector<std::string> str_list(const ojson& j, const char* key,
                                  const std::string& ctx) {
  const ojson* v = find(j, key);
  if (!v) return {};
  if (v->is_string()) return {v->get<std::string>()};
  if (!v->is_array()) cfg_fail(ctx + "." + key + " must be a string or array");
  std::vector<std::string> out;
  out.reserve(v->size());
  for (const auto& e : *v) {
    if (!e.is_string()) cfg_fail(ctx + "." + key + " has a non-string entry");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace jsonu

namespace {

using jsonu::find;
using jsonu::num;
using jsonu::req_num;
using jsonu::str;
using jsonu::vec;

void fill_dim(Vec& v, int dim, const char* what) {
  if (v.empty()) {
    v.assign(static_cast<std::size_t>(dim), 0.0);
  } else if (static_cast<int>(v.size()) != dim) {
    throw DimensionMismatch(std::string(what) + ": expected length " +
                            std::to_string(dim) + ", got " +
                            std::to_string(v.size()));
  }
}

int infer_dim(std::initializer_list<const Vec*> candidates, int explicit_dim,
              int fallback) {
  if (explicit_dim > 0) return explicit_dim;
  for (const Vec* v : candidates) {
    if (!v->empty()) return static_cast<int>(v->size());
  }
  return fallback;
}

void check_model_tag(const ojson& j, const char* expected) {
  const std::string model = str(j, "model", expected, "spec");
  if (model != expected) {
    cfg_fail(std::string("spec.model must be \"") + expected + "\", got \"" +
             model + "\"");
  }
  const ojson* schema = find(j, "schema");
  if (schema && (!schema->is_string() ||
                 schema->get<std::string>() != kSchemaVersion)) {
    cfg_fail(std::string("spec.schema must be \"") + kSchemaVersion + "\"");
  }
}

OutcomeLink link_from_string(const std::string& s) {
  if (s == "identity") return OutcomeLink::identity;
  if (s == "logistic") return OutcomeLink::logistic;
  cfg_fail("outcome.link must be \"identity\" or \"logistic\", got \"" + s +
           "\"");
}

NoiseTransformY noise_from_string(const std::string& s) {
  if (s == "identity") return NoiseTransformY::identity;
  if (s == "mix") return NoiseTransformY::mix;
  cfg_fail("outcome.noise_transform must be \"identity\" or \"mix\", got \"" +
           s + "\"");
}

ojson evidence_bound_json(double v, bool upper) {
  if (upper ? v == kInf : v == -kInf) return nullptr;
  return v;
}

}  // namespace

// --- LinearScmSpec -----------------------------------------------------------

ojson linear_spec_to_json(const LinearScmSpec& s) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["model"] = "two-mediator";
  j["mediator_m"] = {{"intercept", s.g0},
                     {"x", s.g1},
                     {"c", s.g2},
                     {"sigma", s.sigma_m}};
  j["mediator_n"] = {{"intercept", s.b0},
                     {"x", s.b1},
                     {"m", s.b2},
                     {"c", s.b3},
                     {"sigma", s.sigma_n}};
  ojson out;
  out["intercept"] = s.a0;
  out["x"] = s.a1;
  out["m"] = s.a2;
  out["n"] = s.a3;
  out["c"] = s.a4;
  out["sigma"] = s.sigma_y;
  out["link"] = s.link == OutcomeLink::logistic ? "logistic" : "identity";
  out["logistic_scale"] = s.logistic_scale;
  out["noise_transform"] =
      s.noise_transform_y == NoiseTransformY::mix ? "mix" : "identity";
  out["alpha_mix"] = s.alpha_mix;
  j["outcome"] = out;
  return j;
}

LinearScmSpec linear_spec_from_json(const ojson& j) {
  if (!j.is_object()) cfg_fail("spec must be a JSON object");
  check_model_tag(j, "two-mediator");
  const ojson* m = find(j, "mediator_m");
  const ojson* n = find(j, "mediator_n");
  const ojson* y = find(j, "outcome");
  if (!m || !n || !y) {
    cfg_fail("spec requires mediator_m, mediator_n, and outcome blocks");
  }

  LinearScmSpec s;
  s.g0 = num(*m, "intercept", 0.0, "mediator_m");
  s.g1 = vec(*m, "x", "mediator_m");
  s.g2 = vec(*m, "c", "mediator_m");
  s.sigma_m = num(*m, "sigma", 1.0, "mediator_m");

  s.b0 = num(*n, "intercept", 0.0, "mediator_n");
  s.b1 = vec(*n, "x", "mediator_n");
  s.b2 = num(*n, "m", 0.0, "mediator_n");
  s.b3 = vec(*n, "c", "mediator_n");
  s.sigma_n = num(*n, "sigma", 1.0, "mediator_n");

  s.a0 = num(*y, "intercept", 0.0, "outcome");
  s.a1 = vec(*y, "x", "outcome");
  s.a2 = num(*y, "m", 0.0, "outcome");
  s.a3 = num(*y, "n", 0.0, "outcome");
  s.a4 = vec(*y, "c", "outcome");
  s.sigma_y = num(*y, "sigma", 1.0, "outcome");
  s.link = link_from_string(str(*y, "link", "identity", "outcome"));
  s.logistic_scale = num(*y, "logistic_scale", 1.0, "outcome");
  s.noise_transform_y =
      noise_from_string(str(*y, "noise_transform", "identity", "outcome"));
  s.alpha_mix = num(*y, "alpha_mix", 1.0, "outcome");

  const int edx = static_cast<int>(num(j, "dim_x", 0.0, "spec"));
  const int edc = static_cast<int>(num(j, "dim_c", 0.0, "spec"));
  s.dim_x = infer_dim({&s.a1, &s.g1, &s.b1}, edx, 1);
  s.dim_c = infer_dim({&s.a4, &s.g2, &s.b3}, edc, 0);
  fill_dim(s.g1, s.dim_x, "mediator_m.x");
  fill_dim(s.b1, s.dim_x, "mediator_n.x");
  fill_dim(s.a1, s.dim_x, "outcome.x");
  fill_dim(s.g2, s.dim_c, "mediator_m.c");
  fill_dim(s.b3, s.dim_c, "mediator_n.c");
  fill_dim(s.a4, s.dim_c, "outcome.c");
  validate_spec(s);
  return s;
}

// --- TriScmSpec --------------------------------------------------------------

ojson tri_spec_to_json(const TriScmSpec& s) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["model"] = "three-mediator";
  j["mediator_m1"] = {{"intercept", s.p0},
                      {"x", s.p1},
                      {"c", s.p2},
                      {"sigma", s.sigma_m1}};
  j["mediator_m2"] = {{"intercept", s.q0},
                      {"x", s.q1},
                      {"m1", s.q2},
                      {"c", s.q3},
                      {"sigma", s.sigma_m2}};
  j["mediator_m3"] = {{"intercept", s.d0}, {"x", s.d1},
                      {"m1", s.d2},        {"m2", s.d3},
                      {"c", s.d4},         {"sigma", s.sigma_m3}};
  j["outcome"] = {{"intercept", s.a0}, {"x", s.a1},  {"m1", s.a2},
                  {"m2", s.a3},        {"m3", s.a4}, {"c", s.a5},
                  {"sigma", s.sigma_y}};
  return j;
}

TriScmSpec tri_spec_from_json(const ojson& j) {
  if (!j.is_object()) cfg_fail("tri spec must be a JSON object");
  check_model_tag(j, "three-mediator");
  const ojson* m1 = find(j, "mediator_m1");
  const ojson* m2 = find(j, "mediator_m2");
  const ojson* m3 = find(j, "mediator_m3");
  const ojson* y = find(j, "outcome");
  if (!m1 || !m2 || !m3 || !y) {
    cfg_fail(
        "tri spec requires mediator_m1, mediator_m2, mediator_m3, and "
        "outcome blocks");
  }

  TriScmSpec s;
  s.p0 = num(*m1, "intercept", 0.0, "mediator_m1");
  s.p1 = vec(*m1, "x", "mediator_m1");
  s.p2 = vec(*m1, "c", "mediator_m1");
  s.sigma_m1 = num(*m1, "sigma", 1.0, "mediator_m1");

  s.q0 = num(*m2, "intercept", 0.0, "mediator_m2");
  s.q1 = vec(*m2, "x", "mediator_m2");
  s.q2 = num(*m2, "m1", 0.0, "mediator_m2");
  s.q3 = vec(*m2, "c", "mediator_m2");
  s.sigma_m2 = num(*m2, "sigma", 1.0, "mediator_m2");

  s.d0 = num(*m3, "intercept", 0.0, "mediator_m3");
  s.d1 = vec(*m3, "x", "mediator_m3");
  s.d2 = num(*m3, "m1", 0.0, "mediator_m3");
  s.d3 = num(*m3, "m2", 0.0, "mediator_m3");
  s.d4 = vec(*m3, "c", "mediator_m3");
  s.sigma_m3 = num(*m3, "sigma", 1.0, "mediator_m3");

  s.a0 = num(*y, "intercept", 0.0, "outcome");
  s.a1 = vec(*y, "x", "outcome");
  s.a2 = num(*y, "m1", 0.0, "outcome");
  s.a3 = num(*y, "m2", 0.0, "outcome");
  s.a4 = num(*y, "m3", 0.0, "outcome");
  s.a5 = vec(*y, "c", "outcome");
  s.sigma_y = num(*y, "sigma", 1.0, "outcome");

  const int edx = static_cast<int>(num(j, "dim_x", 0.0, "tri spec"));
  const int edc = static_cast<int>(num(j, "dim_c", 0.0, "tri spec"));
  s.dim_x = infer_dim({&s.a1, &s.p1, &s.q1, &s.d1}, edx, 1);
  s.dim_c = infer_dim({&s.a5, &s.p2, &s.q3, &s.d4}, edc, 0);
  fill_dim(s.p1, s.dim_x, "mediator_m1.x");
  fill_dim(s.q1, s.dim_x, "mediator_m2.x");
  fill_dim(s.d1, s.dim_x, "mediator_m3.x");
  fill_dim(s.a1, s.dim_x, "outcome.x");
  fill_dim(s.p2, s.dim_c, "mediator_m1.c");
  fill_dim(s.q3, s.dim_c, "mediator_m2.c");
  fill_dim(s.d4, s.dim_c, "mediator_m3.c");
  fill_dim(s.a5, s.dim_c, "outcome.c");
  validate_tri_spec(s);
  return s;
}

// --- PnsQuery ----------------------------------------------------------------

ojson query_to_json(const PnsQuery& q) {
  ojson j;
  j["x"] = q.x;
  j["x0"] = q.x_prime;
  j["y"] = q.y;
  j["c"] = q.c;
  if (q.evidence.empty) {
    j["evidence"] = nullptr;
  } else {
    ojson e;
    e["x_e"] = q.evidence.x_e;
    e["lo"] = evidence_bound_json(q.evidence.y_lo, /*upper=*/false);
    e["hi"] = evidence_bound_json(q.evidence.y_hi, /*upper=*/true);
    e["closure"] = q.evidence.closed ? "closed" : "half_open";
    j["evidence"] = e;
  }
  return j;
}

PnsQuery query_from_json(const ojson& j, int dim_x, int dim_c) {
  if (!j.is_object()) cfg_fail("query must be a JSON object");
  PnsQuery q;
  q.x = vec(j, "x", "query");
  q.x_prime = vec(j, "x0", "query");
  q.c = vec(j, "c", "query");
  if (q.x.empty()) q.x.assign(static_cast<std::size_t>(dim_x), 1.0);
  if (q.x_prime.empty()) q.x_prime.assign(static_cast<std::size_t>(dim_x), 0.0);
  if (q.c.empty()) q.c.assign(static_cast<std::size_t>(dim_c), 0.0);
  q.y = req_num(j, "y", "query");

  const ojson* ev = find(j, "evidence");
  if (ev) {
    if (!ev->is_object()) cfg_fail("query.evidence must be an object or null");
    q.evidence.empty = false;
    q.evidence.x_e = vec(*ev, "x_e", "evidence");
    if (q.evidence.x_e.empty()) {
      cfg_fail("evidence.x_e is required when evidence is present");
    }
    q.evidence.y_lo = num(*ev, "lo", -kInf, "evidence");
    q.evidence.y_hi = num(*ev, "hi", kInf, "evidence");
    const std::string closure = str(*ev, "closure", "half_open", "evidence");
    if (closure == "closed") {
      q.evidence.closed = true;
    } else if (closure == "half_open" || closure == "half-open" ||
               closure == "half") {
      q.evidence.closed = false;
    } else {
      cfg_fail("evidence.closure must be \"closed\" or \"half_open\", got \"" +
               closure + "\"");
    }
  }
  return q;
}

// --- report ------------------------------------------------------------------

namespace {

/// (name, point, ci_lo, ci_hi) rows in presentation order.
struct Row {
  const char* name;
  double value;
  bool has_ci = false;
  double lo = 0.0, hi = 0.0;
};

std::vector<Row> component_rows(const Report& r) {
  std::vector<Row> rows;
  if (r.tri) {
    const TriDecomposition& t = *r.tri;
    rows.push_back({"t_pns", t.t_pns});
    rows.push_back({"nd_pns", t.nd_pns});
    rows.push_back({"ni_pns", t.ni_pns});
    for (int k = 0; k < 8; ++k) {
      rows.push_back({kTriPathNames[k], t.paths[k]});
    }
    rows.push_back({"agg_xy", t.agg_xy});
    rows.push_back({"agg_xny", t.agg_xny});
    rows.push_back({"agg_xmny", t.agg_xmny});
    rows.push_back({"agg_xmy", t.agg_xmy});
    return rows;
  }
  if (!r.components) return rows;
  const ComponentSet& c = *r.components;
  auto add = [&](const char* name, double v, double lo, double hi) {
    Row row{name, v};
    if (r.ci) {
      row.has_ci = true;
      row.lo = lo;
      row.hi = hi;
    }
    rows.push_back(row);
  };
  const ComponentSet lo = r.ci ? r.ci->first : ComponentSet{};
  const ComponentSet hi = r.ci ? r.ci->second : ComponentSet{};
  add("t_pns", c.t_pns, lo.t_pns, hi.t_pns);
  add("nd_pns", c.nd_pns, lo.nd_pns, hi.nd_pns);
  add("ni_pns", c.ni_pns, lo.ni_pns, hi.ni_pns);
  add("pns_xy", c.pns_xy, lo.pns_xy, hi.pns_xy);
  add("pns_xny", c.pns_xny, lo.pns_xny, hi.pns_xny);
  add("pns_xmny", c.pns_xmny, lo.pns_xmny, hi.pns_xmny);
  add("pns_xmy", c.pns_xmy, lo.pns_xmy, hi.pns_xmy);
  return rows;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f%%", v * 100.0);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string vec_text(const Vec& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << "]";
  return os.str();
}

}  // namespace

ojson report_to_json(const Report& r) {
  ojson j;
  j["query"] = r.query ? query_to_json(*r.query) : ojson(nullptr);
  j["method"] = r.method;

  if (r.components || r.tri) {
    ojson comp = ojson::object();
    for (const Row& row : component_rows(r)) comp[row.name] = row.value;
    j["components"] = comp;
  } else {
    j["components"] = nullptr;
  }

  if (r.diagnostics) {
    j["gammas"] = {r.diagnostics->gamma1, r.diagnostics->gamma2,
                   r.diagnostics->gamma3, r.diagnostics->gamma4};
    j["delta"] = r.diagnostics->delta;
  } else {
    j["gammas"] = nullptr;
    j["delta"] = nullptr;
  }

  if (r.ci) {
    ojson ci = ojson::object();
    ci["level"] = r.ci_level;
    for (const Row& row : component_rows(r)) {
      ci[row.name] = {row.lo, row.hi};
    }
    j["ci"] = ci;
  } else {
    j["ci"] = nullptr;
  }

  if (r.components || r.tri) {
    ojson a;
    a["theta_monotone"] = r.theta_monotone;
    a["point_evidence"] = r.point_evidence;
    a["acceptance_rate"] = r.acceptance_rate;
    j["assumptions"] = a;
  } else {
    j["assumptions"] = nullptr;
  }

  ojson meta;
  meta["seed"] = r.seed;
  meta["n"] = r.n;
  meta["runtime_ms"] = r.runtime_ms;
  if (r.dropped_rows) meta["dropped_rows"] = *r.dropped_rows;
  j["meta"] = meta;

  if (r.dataset_path) {
    ojson d;
    d["path"] = *r.dataset_path;
    d["rows"] = r.n;
    d["columns"] = r.dataset_columns;
    j["dataset"] = d;
  }
  return j;
}

std::string dump_report(const Report& r) {
  return report_to_json(r).dump(2) + "\n";
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "method: " << r.method << "\n";
  if (r.query) {
    const PnsQuery& q = *r.query;
    os << "query: x=" << vec_text(q.x) << " x0=" << vec_text(q.x_prime)
       << " y=" << q.y << " c=" << vec_text(q.c) << "\n";
    if (q.evidence.empty) {
      os << "evidence: none\n";
    } else {
      os << "evidence: X=" << vec_text(q.evidence.x_e) << " Y in "
         << (q.evidence.y_lo == -kInf ? std::string("(-inf")
                                      : "[" + std::to_string(q.evidence.y_lo))
         << ", "
         << (q.evidence.y_hi == kInf ? std::string("+inf)")
                                     : std::to_string(q.evidence.y_hi) +
                                           (q.evidence.closed ? "]" : ")"))
         << "\n";
    }
  }
  if (r.components || r.tri) {
    os << "assumptions: theta_monotone=" << (r.theta_monotone ? "yes" : "no")
       << " point_evidence=" << (r.point_evidence ? "yes" : "no")
       << " acceptance_rate=" << pct(r.acceptance_rate) << "\n\n";
    const std::vector<Row> rows = component_rows(r);
    const int name_w = 14, col_w = 13;
    os << std::left << std::setw(name_w) << "component" << std::right
       << std::setw(col_w) << "estimate";
    if (r.ci) {
      os << std::setw(col_w) << "ci_low" << std::setw(col_w) << "ci_high";
    }
    os << "\n";
    for (const Row& row : rows) {
      os << std::left << std::setw(name_w) << row.name << std::right
         << std::setw(col_w) << pct(row.value);
      if (r.ci) {
        if (row.has_ci) {
          os << std::setw(col_w) << pct(row.lo) << std::setw(col_w)
             << pct(row.hi);
        } else {
          os << std::setw(col_w) << "-" << std::setw(col_w) << "-";
        }
      }
      os << "\n";
    }
    if (r.ci) {
      char lvl[32];
      std::snprintf(lvl, sizeof(lvl), "%.1f%%", r.ci_level * 100.0);
      os << "\nci: percentile bootstrap, level " << lvl << "\n";
    }
    if (r.diagnostics) {
      const GammaDelta& g = *r.diagnostics;
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "gammas: [%.6f, %.6f, %.6f, %.6f]  delta: %.6f\n",
                    g.gamma1, g.gamma2, g.gamma3, g.gamma4, g.delta);
      os << buf;
    }
  }
  if (r.dataset_path) {
    os << "wrote " << r.n << " rows to " << *r.dataset_path << " (columns: ";
    for (std::size_t i = 0; i < r.dataset_columns.size(); ++i) {
      if (i) os << ",";
      os << r.dataset_columns[i];
    }
    os << ")\n";
  }
  os << "meta: seed=" << r.seed << " n=" << r.n
     << " runtime_ms=" << r.runtime_ms;
  if (r.dropped_rows) os << " dropped_rows=" << *r.dropped_rows;
  os << "\n";
  return os.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream os;
  if (r.dataset_path) {
    os << "key,value\n"
       << "rows," << r.n << "\n"
       << "path," << *r.dataset_path << "\n";
    return os.str();
  }
  os << "component,estimate,ci_low,ci_high\n";
  for (const Row& row : component_rows(r)) {
    os << row.name << "," << full(row.value) << ",";
    if (row.has_ci) {
      os << full(row.lo) << "," << full(row.hi);
    } else {
      os << ",";
    }
    os << "\n";
  }
  return os.str();
}

// --- parsing helpers -----------------------------------------------------------

ojson parse_json_text(const std::string& text, const std::string& what) {
  ojson j = ojson::parse(text, /*cb=*/nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) cfg_fail(what + ": invalid JSON");
  return j;
}

void require_schema(const ojson& j) {
  if (!j.is_object()) cfg_fail("config must be a JSON object");
  const ojson* schema = jsonu::find(j, "schema");
  if (!schema || !schema->is_string() ||
      schema->get<std::string>() != kSchemaVersion) {
    cfg_fail(std::string("config requires \"schema\": \"") + kSchemaVersion +
             "\"");
  }
}

}  // namespace pocmed
