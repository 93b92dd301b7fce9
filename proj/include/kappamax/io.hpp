#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kappamax/errors.hpp"
#include "kappamax/table.hpp"
#include "kappamax/weights.hpp"

namespace kappamax {

/// A table as read from disk. Two formats: `csv2`, a rectangular integer
/// grid with rows = rater 1 and columns = rater 2; and `json_multi`, an
/// object {"raters", "levels", "counts", "labels"?} with the counts flat in
/// rater-1-slowest order.
struct TableFile {
  enum class Format { csv2, json_multi };
  Format format = Format::csv2;
  Table table;
  std::vector<std::string> labels;  // optional category labels
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::vector<std::string>> read_csv_cells(
    const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      row.push_back(trim(line.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Count parse_count(const std::string& cell) {
  Count value = 0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError("not an integer count: '" + cell + "'");
  }
  return value;
}

inline double parse_double(const std::string& cell) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw ParseError("");
    return v;
  } catch (...) {
    throw ParseError("not a number: '" + cell + "'");
  }
}

}  // namespace detail

inline TableFile parse_table_csv(const std::string& text) {
  const auto rows = detail::read_csv_cells(text);
  if (rows.empty()) throw ParseError("empty table file");
  const int k = static_cast<int>(rows.size());
  std::vector<Count> counts;
  counts.reserve(static_cast<std::size_t>(k) * k);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != k) {
      throw ParseError("two-rater CSV tables must be square");
    }
    for (const auto& cell : row) counts.push_back(detail::parse_count(cell));
  }
  return TableFile{TableFile::Format::csv2, Table(2, k, std::move(counts)), {}};
}

inline TableFile parse_table_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("raters") || !j.contains("levels") ||
      !j.contains("counts")) {
    throw ParseError("table JSON needs raters, levels, and counts");
  }
  if (!j["raters"].is_number_integer() || !j["levels"].is_number_integer() ||
      !j["counts"].is_array()) {
    throw ParseError("malformed table JSON");
  }
  std::vector<Count> counts;
  counts.reserve(j["counts"].size());
  for (const auto& v : j["counts"]) {
    if (!v.is_number_integer()) {
      throw ParseError("counts must be integers");
    }
    counts.push_back(v.get<Count>());
  }
  TableFile out{TableFile::Format::json_multi,
                Table(j["raters"].get<int>(), j["levels"].get<int>(),
                      std::move(counts)),
                {}};
  if (j.contains("labels")) {
    if (!j["labels"].is_array() ||
        static_cast<int>(j["labels"].size()) != out.table.levels()) {
      throw ParseError("labels must list one name per level");
    }
    for (const auto& v : j["labels"]) out.labels.push_back(v.get<std::string>());
  }
  return out;
}

/// Parses a table from text, dispatching on the leading character: '{' means
/// the JSON multi-rater format, anything else the two-rater CSV grid.
inline TableFile parse_table_text(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    return c == '{' ? parse_table_json(text) : parse_table_csv(text);
  }
  throw ParseError("empty table file");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline TableFile parse_table(const std::string& path) {
  return parse_table_text(read_file(path));
}

/// Serializes a table in the JSON multi-rater format (counts flat,
/// rater-1 slowest). Re-parsing yields an identical table.
inline nlohmann::json table_to_json(const Table& t,
                                    const std::vector<std::string>& labels = {}) {
  nlohmann::json j;
  j["raters"] = t.raters();
  j["levels"] = t.levels();
  j["counts"] = std::vector<Count>(t.counts().begin(), t.counts().end());
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

/// Builds a scheme from a CLI specification: a builtin name
/// (quadratic | linear | sqrt | identity) or the path of a CSV file holding a
/// k x k matrix of disagreement weights.
inline DisagreementScheme scheme_from_spec(const std::string& spec,
                                           int levels) {
  if (spec == "quadratic") return quadratic_scheme(levels);
  if (spec == "linear") return linear_scheme(levels);
  if (spec == "sqrt") return sqrt_scheme(levels);
  if (spec == "identity") return identity_scheme(levels);
  const auto rows = detail::read_csv_cells(read_file(spec));
  std::vector<std::vector<double>> m;
  m.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& cell : row) r.push_back(detail::parse_double(cell));
    m.push_back(std::move(r));
  }
  if (static_cast<int>(m.size()) != levels) {
    throw DimensionError("custom scheme size does not match the table levels");
  }
  return custom_scheme(m);
}

}  // namespace kappamax
