#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "imbtab/core/types.hpp"

namespace imbtab::data {

/// Column-oriented numeric feature matrix plus a binary label vector. The
/// universal dataset carrier; treated as immutable once built, so sharing
/// across threads is safe.
struct Table {
  std::vector<std::string> feature_names;
  Matrix features;   // row_count x col_count
  IntVector labels;  // 0 = safe, 1 = malware

  Index row_count() const { return features.rows(); }
  Index col_count() const { return features.cols(); }

  /// Throws Error if any structural invariant is violated: name/column
  /// mismatch, duplicate names, label/row mismatch, non-finite cells,
  /// labels outside {0, 1}.
  void validate() const;
};

/// Row counts indexed by label: counts[0] for the negative class, counts[1]
/// for the positive class.
std::array<Index, 2> class_counts(const Table& t);

/// Row indices carrying the given label, in row order.
std::vector<Index> rows_with_label(const Table& t, int label);

/// Label held by fewer rows; ties resolve to 1 so the synthesis target stays
/// the positive class.
int minority_label(const Table& t);

Table select_rows(const Table& t, std::span<const Index> rows);

/// Rows of b appended below a. Feature names must match.
Table concat_rows(const Table& a, const Table& b);

}  // namespace imbtab::data
