#include "imbtab/data/table.hpp"

#include <cmath>
#include <unordered_set>

#include "imbtab/core/error.hpp"

namespace imbtab::data {

void Table::validate() const {
  if (static_cast<Index>(feature_names.size()) != features.cols()) {
    throw Error("feature_names length (" + std::to_string(feature_names.size()) +
                ") does not match column count (" + std::to_string(features.cols()) + ")");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names) {
    if (!seen.insert(name).second) {
      throw Error("duplicate feature name: " + name);
    }
  }
  if (labels.size() != features.rows()) {
    throw Error("labels length (" + std::to_string(labels.size()) +
                ") does not match row count (" + std::to_string(features.rows()) + ")");
  }
  if (features.size() > 0 && !features.allFinite()) {
    throw Error("features contain non-finite values");
  }
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error("label at row " + std::to_string(i) + " is " +
                  std::to_string(labels[i]) + ", expected 0 or 1");
    }
  }
}

std::array<Index, 2> class_counts(const Table& t) {
  std::array<Index, 2> counts{0, 0};
  for (Index i = 0; i < t.labels.size(); ++i) ++counts[static_cast<std::size_t>(t.labels[i])];
  return counts;
}

std::vector<Index> rows_with_label(const Table& t, int label) {
  std::vector<Index> rows;
  for (Index i = 0; i < t.labels.size(); ++i) {
    if (t.labels[i] == label) rows.push_back(i);
  }
  return rows;
}

int minority_label(const Table& t) {
  auto counts = class_counts(t);
  return counts[1] <= counts[0] ? 1 : 0;
}

Table select_rows(const Table& t, std::span<const Index> rows) {
  Table out;
  out.feature_names = t.feature_names;
  out.features.resize(static_cast<Index>(rows.size()), t.col_count());
  out.labels.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = t.features.row(rows[i]);
    out.labels[static_cast<Index>(i)] = t.labels[rows[i]];
  }
  return out;
}

Table concat_rows(const Table& a, const Table& b) {
  if (a.feature_names != b.feature_names) {
    throw Error("cannot concatenate tables with different feature names");
  }
  Table out;
  out.feature_names = a.feature_names;
  out.features.resize(a.row_count() + b.row_count(), a.col_count());
  out.features.topRows(a.row_count()) = a.features;
  out.features.bottomRows(b.row_count()) = b.features;
  out.labels.resize(a.row_count() + b.row_count());
  out.labels.head(a.row_count()) = a.labels;
  out.labels.tail(b.row_count()) = b.labels;
  return out;
}

}  // namespace imbtab::data
