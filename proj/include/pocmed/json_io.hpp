#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pocmed/model.hpp"
#include "pocmed/trimediator.hpp"

namespace pocmed {

using ojson = nlohmann::ordered_json;

/// Everything a run produces, in one renderable bundle. The JSON form has
/// top-level keys query, method, components, gammas, delta, ci, assumptions,
/// meta (plus dataset for generation runs); text and CSV renderings are
/// derived views of the same numbers.
struct Report {
  std::string method;  // analytic | estimate | oracle | tri-oracle | simulate

  std::optional<PnsQuery> query;
  std::optional<ComponentSet> components;
  std::optional<TriDecomposition> tri;  // set for tri-oracle runs

  std::optional<GammaDelta> diagnostics;  // raw gammas/delta when requested
  std::optional<std::pair<ComponentSet, ComponentSet>> ci;  // (lower, upper)
  double ci_level = 0.95;

  bool theta_monotone = true;
  bool point_evidence = false;
  double acceptance_rate = 1.0;
  std::optional<std::size_t> dropped_rows;  // estimate: rows rejected on ingest

  std::uint64_t seed = 0;
  std::uint64_t n = 0;  // draws (oracle), rows (estimate/simulate), 0 (analytic)
  std::int64_t runtime_ms = 0;

  // simulate runs only
  std::optional<std::string> dataset_path;
  std::vector<std::string> dataset_columns;
};

/// Schema version string required at the top of every config document.
extern const char* kSchemaVersion;

// --- model/query serialization -------------------------------------------

ojson linear_spec_to_json(const LinearScmSpec& spec);
LinearScmSpec linear_spec_from_json(const ojson& j);

ojson tri_spec_to_json(const TriScmSpec& spec);
TriScmSpec tri_spec_from_json(const ojson& j);

ojson query_to_json(const PnsQuery& q);
/// dim_x/dim_c supply defaults (x = ones, x0 = zeros, c = zeros) and let
/// scalar x/x0 entries stand for length-1 vectors.
PnsQuery query_from_json(const ojson& j, int dim_x, int dim_c);

// --- report ----------------------------------------------------------------

ojson report_to_json(const Report& report);
/// Serialized report: 2-space indent, trailing newline; stable key order so
/// identical runs produce identical bytes.
std::string dump_report(const Report& report);

/// Aligned text table; probabilities as percentages with 3 decimals.
std::string render_text(const Report& report);
/// component,estimate,ci_low,ci_high rows; raw [0,1] values, full precision.
std::string render_csv(const Report& report);

// --- parsing helpers --------------------------------------------------------

/// Parses a JSON text into an object, mapping parse failures to ConfigError.
ojson parse_json_text(const std::string& text, const std::string& what);

/// Checks `"schema": "poc-mediate/v1"`; ConfigError when absent or different.
void require_schema(const ojson& j);

/// Typed JSON field access with ConfigError diagnostics naming `ctx.key`.
namespace jsonu {
/// Key present and non-null, else nullptr.
const ojson* find(const ojson& j, const char* key);
double num(const ojson& j, const char* key, double dflt,
           const std::string& ctx);
double req_num(const ojson& j, const char* key, const std::string& ctx);
/// Missing -> {}; scalar -> length-1 vector; numeric array -> vector.
Vec vec(const ojson& j, const char* key, const std::string& ctx);
std::string str(const ojson& j, const char* key, const char* dflt,
                const std::string& ctx);
bool flag(const ojson& j, const char* key, bool dflt, const std::string& ctx);
/// Missing -> {}; string -> one-element list; string array -> list.
std::vector<std::string> str_list(const ojson& j, const char* key,
                                  const std::string& ctx);
}  // namespace jsonu

}  // namespace pocmed
