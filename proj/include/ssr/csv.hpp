#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Writes columns of equal length with a mandatory header row, atomically
// (temp file + rename) so interrupted runs never leave partial output.
inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw input_error("write_csv: header/column mismatch");
  for (const auto& c : columns)
    if (c.size() != columns.front().size())
      throw input_error("write_csv: ragged columns");

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw input_error("write_csv: cannot open " + tmp.string());
    for (std::size_t i = 0; i < header.size(); ++i)
      out << header[i] << (i + 1 < header.size() ? "," : "\n");
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < columns.size(); ++c)
        out << format_value(columns[c][r]) << (c + 1 < columns.size() ? "," : "\n");
    if (!out) throw input_error("write_csv: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("read_csv: cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw input_error("read_csv: empty file " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  if (table.header.empty()) throw input_error("read_csv: missing header in " + path.string());
  table.columns.assign(table.header.size(), {});
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= table.columns.size())
        throw input_error("read_csv: too many fields at line " + std::to_string(line_no));
      try {
        table.columns[c].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw input_error("read_csv: bad number '" + cell + "' at line " +
                          std::to_string(line_no));
      }
      ++c;
    }
    if (c != table.columns.size())
      throw input_error("read_csv: expected " + std::to_string(table.columns.size()) +
                        " fields at line " + std::to_string(line_no));
  }
  if (table.rows() == 0) throw input_error("read_csv: no data rows in " + path.string());
  return table;
}

}  // namespace ssr
