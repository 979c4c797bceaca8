#pragma once

#include <string>

#include "imbtab/data/table.hpp"

namespace imbtab::data {

/// Reads an RFC-4180-style CSV (header row required, '.' decimal separator,
/// UTF-8) and splits off the label column. Missing and non-numeric values are
/// hard errors. Row order is preserved.
Table load_csv(const std::string& path, const std::string& label_column = "Label");

/// Writes features plus the label column. Numbers use the shortest decimal
/// rendering that round-trips, so load_csv(write_csv(t)) == t cell for cell.
void write_csv(const std::string& path, const Table& t,
               const std::string& label_column = "Label");

}  // namespace imbtab::data
