#pragma once

#include <map>
#include <string>
#include <vector>

#include "pocmed/dataset.hpp"
#include "pocmed/errors.hpp"

namespace pocmed {

/// A parsed delimited text file: header row plus string cells.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 parsing: quoted fields, "" escapes, embedded delimiters and
/// newlines, CRLF or LF endings, optional UTF-8 BOM. `delimiter` 0 means
/// auto-detect between ',' and ';' from the header line.
CsvTable parse_csv_text(const std::string& text, char delimiter = 0);
CsvTable read_csv(const std::string& path, char delimiter = 0);

/// Column names to role assignment; all of x, m, n, y are required, c may be
/// empty.
struct RoleMap {
  std::vector<std::string> x;
  std::string m;
  std::string n;
  std::string y;
  std::vector<std::string> c;
};

/// column name -> (cell string -> numeric value)
using EncodingMap = std::map<std::string, std::map<std::string, double>>;

struct IngestResult {
  Dataset data;
  std::size_t dropped_rows = 0;  // rows rejected for missing (empty) cells
};

/// Builds a numeric Dataset holding the role columns (order: x..., m, n, y,
/// c...). Empty cells drop the whole row (counted); a non-numeric cell whose
/// column has no covering encoding entry raises UnmappableValue naming the
/// column and 1-based data row.
IngestResult ingest_csv(const CsvTable& table, const RoleMap& roles,
                        const EncodingMap& encoding);
IngestResult ingest_csv_file(const std::string& path, const RoleMap& roles,
                             const EncodingMap& encoding, char delimiter = 0);

/// Comma CSV with header; numbers at full round-trip precision.
std::string dataset_to_csv(const Dataset& data);
void write_dataset_csv(const Dataset& data, const std::string& path);

}  // namespace pocmed
