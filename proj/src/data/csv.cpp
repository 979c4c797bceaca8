#include "imbtab/data/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "imbtab/core/error.hpp"

namespace imbtab::data {
namespace {

// Splits one CSV record. Quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  if (cell.empty()) throw MissingValueError(row, col);
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw NonNumericCellError(row, col, cell);
  }
  return value;
}

std::string render_cell(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Table load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path);

  std::string line;
  if (!std::getline(in, line)) throw Error("empty file (no header row): " + path);
  const auto header = split_record(strip_cr(line));

  Index label_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == label_column) {
      label_col = static_cast<Index>(i);
      break;
    }
  }
  if (label_col < 0) throw MissingLabelColumnError(label_column);

  Table t;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (static_cast<Index>(i) != label_col) t.feature_names.push_back(header[i]);
  }

  std::vector<double> cells;
  std::vector<int> labels;
  std::size_t n_rows = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
    const auto fields = split_record(line);
    ++n_rows;
    if (fields.size() != header.size()) {
      throw Error("row " + std::to_string(n_rows) + " has " +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const double value = parse_cell(fields[i], n_rows, i + 1);
      if (static_cast<Index>(i) == label_col) {
        if (value != 0.0 && value != 1.0) throw InvalidLabelError(n_rows, fields[i]);
        labels.push_back(static_cast<int>(value));
      } else {
        cells.push_back(value);
      }
    }
  }

  const Index cols = static_cast<Index>(t.feature_names.size());
  t.features.resize(static_cast<Index>(n_rows), cols);
  for (Index r = 0; r < static_cast<Index>(n_rows); ++r) {
    for (Index c = 0; c < cols; ++c) {
      t.features(r, c) = cells[static_cast<std::size_t>(r * cols + c)];
    }
  }
  t.labels = Eigen::Map<const IntVector>(labels.data(), static_cast<Index>(labels.size()));
  t.validate();
  return t;
}

void write_csv(const std::string& path, const Table& t, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);

  for (const auto& name : t.feature_names) {
    out << (needs_quoting(name) ? quote(name) : name) << ',';
  }
  out << (needs_quoting(label_column) ? quote(label_column) : label_column) << '\n';

  for (Index r = 0; r < t.row_count(); ++r) {
    for (Index c = 0; c < t.col_count(); ++c) {
      out << render_cell(t.features(r, c)) << ',';
    }
    out << t.labels[r] << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace imbtab::data
