#pragma once

#include <vector>

#include "imbtab/core/types.hpp"

namespace imbtab::learners {

/// One node of a binary decision tree stored in an arena. feature < 0 marks a
/// leaf. Internal nodes send x[feature] < threshold left, else right.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // boosting leaf weight
  double p0 = 0.0;     // forest leaf class frequencies
  double p1 = 0.0;
  double gain = 0.0;   // split gain / impurity decrease, for importances

  bool is_leaf() const { return feature < 0; }
};

/// Arena-backed tree; nodes[0] is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  int leaf_index(const ConstMatrixRef& features, Index row) const;
  const TreeNode& leaf(const ConstMatrixRef& features, Index row) const {
    return nodes[static_cast<std::size_t>(leaf_index(features, row))];
  }
  int leaf_count() const;
};

}  // namespace imbtab::learners
