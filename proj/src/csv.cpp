#include "pocmed/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pocmed {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

char detect_delimiter(const std::string& text) {
  // Count candidate delimiters on the header line, outside quotes.
  std::size_t commas = 0, semis = 0;
  bool quoted = false;
  for (char ch : text) {
    if (ch == '"') quoted = !quoted;
    if (quoted) continue;
    if (ch == '\n') break;
    if (ch == ',') ++commas;
    if (ch == ';') ++semis;
  }
  return semis > commas ? ';' : ',';
}

}  // namespace

CsvTable parse_csv_text(const std::string& text, char delimiter) {
  std::size_t pos = 0;
  // Skip a UTF-8 byte-order mark.
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) pos = 3;
  if (delimiter == 0) delimiter = detect_delimiter(text.substr(pos));

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any_char = false;  // current record has content (guards trailing \n)

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    any_char = false;
  };

  const std::size_t n = text.size();
  for (; pos < n; ++pos) {
    const char ch = text[pos];
    if (quoted) {
      if (ch == '"') {
        if (pos + 1 < n && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any_char = true;
    } else if (ch == delimiter) {
      end_field();
      any_char = true;
    } else if (ch == '\r') {
      // swallowed; LF (or EOF) terminates the record
    } else if (ch == '\n') {
      if (any_char || !field.empty() || !record.empty()) end_record();
    } else {
      field.push_back(ch);
      any_char = true;
    }
  }
  if (quoted) throw ConfigError("malformed CSV: unterminated quoted field");
  if (any_char || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw EmptyDataset("CSV has no header row");
  CsvTable table;
  table.columns = std::move(records.front());
  const std::size_t width = table.columns.size();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw ConfigError("malformed CSV: row " + std::to_string(r) + " has " +
                        std::to_string(records[r].size()) + " fields, header has " +
                        std::to_string(width));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::string& path, char delimiter) {
  return parse_csv_text(read_file(path), delimiter);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
  auto it = std::find(table.columns.begin(), table.columns.end(), name);
  if (it == table.columns.end()) {
    throw MissingColumn("column \"" + name + "\" not found in CSV header");
  }
  return static_cast<std::size_t>(it - table.columns.begin());
}

}  // namespace

IngestResult ingest_csv(const CsvTable& table, const RoleMap& roles,
                        const EncodingMap& encoding) {
  if (roles.x.empty() || roles.m.empty() || roles.n.empty() ||
      roles.y.empty()) {
    throw ConfigError("roles must name x, m, n, and y columns");
  }
  // Source column order: x..., m, n, y, c...
  std::vector<std::string> names = roles.x;
  names.push_back(roles.m);
  names.push_back(roles.n);
  names.push_back(roles.y);
  names.insert(names.end(), roles.c.begin(), roles.c.end());

  std::vector<std::size_t> src;
  src.reserve(names.size());
  for (const std::string& name : names) src.push_back(column_index(table, name));

  IngestResult out;
  out.data.columns = names;
  const std::size_t width = names.size();
  for (std::size_t j = 0; j < roles.x.size(); ++j) out.data.roles.x.push_back(j);
  out.data.roles.m = roles.x.size();
  out.data.roles.n = roles.x.size() + 1;
  out.data.roles.y = roles.x.size() + 2;
  for (std::size_t k = 0; k < roles.c.size(); ++k) {
    out.data.roles.c.push_back(roles.x.size() + 3 + k);
  }

  std::vector<double> row(width);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    bool missing = false;
    for (std::size_t j = 0; j < width && !missing; ++j) {
      const std::string cell = trim(table.rows[r][src[j]]);
      if (cell.empty()) {
        missing = true;
        break;
      }
      auto enc = encoding.find(names[j]);
      if (enc != encoding.end()) {
        auto hit = enc->second.find(cell);
        if (hit != enc->second.end()) {
          row[j] = hit->second;
          continue;
        }
        // fall through: allow numeric cells in partially encoded columns
      }
      if (!parse_number(cell, row[j])) {
        throw UnmappableValue("column \"" + names[j] + "\", row " +
                              std::to_string(r + 1) + ": cannot map value \"" +
                              cell + "\"");
      }
    }
    if (missing) {
      ++out.dropped_rows;
      continue;
    }
    out.data.data.insert(out.data.data.end(), row.begin(), row.end());
  }
  out.data.n_rows = out.data.data.size() / width;
  if (out.data.n_rows == 0) {
    throw EmptyDataset("no usable rows after ingestion (" +
                       std::to_string(out.dropped_rows) + " dropped)");
  }
  return out;
}

IngestResult ingest_csv_file(const std::string& path, const RoleMap& roles,
                             const EncodingMap& encoding, char delimiter) {
  return ingest_csv(read_csv(path, delimiter), roles, encoding);
}

namespace {

void append_csv_field(std::string& out, const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

}  // namespace

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.columns.size(); ++j) {
    if (j) out += ',';
    append_csv_field(out, data.columns[j]);
  }
  out += '\n';
  char buf[40];
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    for (std::size_t j = 0; j < data.columns.size(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", data.at(r, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open file for writing: " + path);
  const std::string text = dataset_to_csv(data);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw ConfigError("failed writing file: " + path);
}

}  // namespace pocmed
