#pragma once

#include <string>
#include <utility>
#include <vector>

#include "imbtab/data/table.hpp"

namespace imbtab::data {

struct DroppedColumn {
  std::string kept;
  std::string dropped;
  double correlation = 0.0;
};

struct PruneReport {
  double threshold = 0.95;
  bool use_absolute = true;
  std::vector<DroppedColumn> dropped;
  std::vector<std::string> remaining_names;
};

/// Pearson correlation between all column pairs. Diagonal is 1; a constant
/// column correlates 0 with every other column (it is uninformative, not
/// collinear — see constant_columns for the diagnostic). Symmetric by
/// construction. Requires at least 2 rows.
Matrix pearson_correlation(const ConstMatrixRef& features);

/// Indices of columns with zero variance, for diagnostics.
std::vector<Index> constant_columns(const ConstMatrixRef& features);

/// Drops the later column of every surviving pair whose correlation exceeds
/// the threshold. Columns are scanned left to right and each candidate is
/// compared against survivors only, so a column is never dropped because of an
/// already-dropped one. use_absolute compares |r| (default) instead of r.
std::pair<Table, PruneReport> prune_correlated(const Table& t, double threshold,
                                               bool use_absolute = true);

}  // namespace imbtab::data
