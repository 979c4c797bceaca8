#include "imbtab/learners/tree.hpp"

namespace imbtab::learners {

int Tree::leaf_index(const ConstMatrixRef& features, Index row) const {
  int node = 0;
  while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    node = features(row, n.feature) < n.threshold ? n.left : n.right;
  }
  return node;
}

int Tree::leaf_count() const {
  int count = 0;
  for (const auto& n : nodes) count += n.is_leaf() ? 1 : 0;
  return count;
}

}  // namespace imbtab::learners
