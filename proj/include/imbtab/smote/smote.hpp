#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imbtab/data/table.hpp"

namespace imbtab::smote {

struct SmoteConfig {
  int k_neighbors = 5;
  // Target size for the minority class; absent means match the majority.
  std::optional<Index> target_count;
  // Scale columns to unit variance before the neighbor search. Off by
  // default: distances run on raw features.
  bool standardize_distances = false;
  std::uint64_t seed = 0;
};

struct ClassNeighbors {
  std::vector<Index> class_rows;               // table row indices, row order
  std::vector<std::vector<Index>> neighbors;   // per class row, k table rows
};

/// k nearest neighbors of every row of the given class, searched within that
/// class only. Euclidean distance, ties broken by lower row index, a row is
/// never its own neighbor.
ClassNeighbors knn_within_class(const data::Table& t, int label, int k,
                                bool standardize = false);

/// Oversamples the minority class by convex interpolation toward minority
/// nearest neighbors until counts reach the target. Original rows are
/// preserved verbatim and synthetic rows are appended after them. An already
/// balanced table is returned unchanged.
data::Table smote_balance(const data::Table& t, const SmoteConfig& cfg);

}  // namespace imbtab::smote
