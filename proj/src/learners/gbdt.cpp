#include "imbtab/learners/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"
#include "imbtab/data/split.hpp"

namespace imbtab::learners {
namespace {

// Stream keys: odd rounds-derived keys for row/column subsampling, one fixed
// key for the early-stopping holdout, so adding rounds never shifts the split.
constexpr std::uint64_t kValSplitKey = 0xE5ULL;

std::uint64_t row_key(int round) { return 1 + 2 * static_cast<std::uint64_t>(round); }
std::uint64_t col_key(int round) { return 2 + 2 * static_cast<std::uint64_t>(round); }

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

double leaf_weight(double g, double h, const GbdtConfig& cfg) {
  return -soft_threshold(g, cfg.l1_alpha) / (h + cfg.l2_lambda);
}

double score_term(double g, double h, const GbdtConfig& cfg) {
  const double s = soft_threshold(g, cfg.l1_alpha);
  return s * s / (h + cfg.l2_lambda);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  bool found() const { return feature >= 0; }
};

/// Node workspace for the presorted exact-greedy search. Every candidate
/// column is sorted once per tree by (value, row); each node then owns the
/// contiguous slice [begin, end) of those shared per-column orders, and
/// splitting stable-partitions the slices so children stay sorted. This keeps
/// per-level work linear instead of re-sorting at every node, and because the
/// within-node visit order is identical to a fresh (value, row) sort, the
/// produced tree is bit-for-bit the same as the naive search.
struct TreeBuilder {
  const ConstMatrixRef& features;
  const Vector& g;
  const Vector& h;
  const GbdtConfig& cfg;
  std::span<const Index> cols;
  std::vector<std::vector<Index>> order;  // per candidate column, (value, row) sorted
  std::vector<Index> scratch;

  TreeBuilder(const ConstMatrixRef& features, const Vector& g, const Vector& h,
              const GbdtConfig& cfg, std::span<const Index> rows,
              std::span<const Index> cols)
      : features(features), g(g), h(h), cfg(cfg), cols(cols) {
    order.resize(cols.size());
    scratch.resize(rows.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto& sorted = order[c];
      sorted.assign(rows.begin(), rows.end());
      const Index col = cols[c];
      std::sort(sorted.begin(), sorted.end(), [&](Index a, Index b) {
        const double va = features(a, col), vb = features(b, col);
        return va < vb || (va == vb && a < b);
      });
    }
  }

  /// Orders already filtered to the in-bag rows (see PresortCache); skips the
  /// per-tree sort entirely.
  TreeBuilder(const ConstMatrixRef& features, const Vector& g, const Vector& h,
              const GbdtConfig& cfg, std::span<const Index> cols,
              std::vector<std::vector<Index>> presorted)
      : features(features), g(g), h(h), cfg(cfg), cols(cols),
        order(std::move(presorted)) {
    scratch.resize(order.empty() ? 0 : order[0].size());
  }

  Index size() const { return order.empty() ? 0 : static_cast<Index>(order[0].size()); }

  /// Exact greedy search over the node slice: sweep each presorted column,
  /// accumulate prefix gradient/hessian sums, and score midpoint thresholds
  /// between distinct consecutive values. Columns ascending and thresholds
  /// ascending with a strictly-greater comparison give the tie rule (lowest
  /// feature, then lowest threshold) for free.
  ///
  /// A split is kept when its gain is positive, or when it is exactly zero on
  /// a node whose gradients still disagree. The zero-gain case matters for
  /// parity patterns (XOR-like data), where the informative structure only
  /// appears one level deeper and every root candidate cancels to zero.
  SplitChoice best_split(Index begin, Index end, double g_sum, double h_sum) const {
    SplitChoice best;
    best.gain = -std::numeric_limits<double>::infinity();
    const double parent_term = score_term(g_sum, h_sum, cfg);

    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Index col = cols[c];
      const auto& sorted = order[c];
      if (features(sorted[static_cast<std::size_t>(begin)], col) ==
          features(sorted[static_cast<std::size_t>(end - 1)], col)) {
        continue;  // constant within the node
      }
      double g_left = 0.0, h_left = 0.0;
      for (Index i = begin; i + 1 < end; ++i) {
        const Index row = sorted[static_cast<std::size_t>(i)];
        g_left += g[row];
        h_left += h[row];
        const double value = features(row, col);
        const double next = features(sorted[static_cast<std::size_t>(i + 1)], col);
        if (value == next) continue;
        const double g_right = g_sum - g_left;
        const double h_right = h_sum - h_left;
        if (h_left < cfg.min_child_weight || h_right < cfg.min_child_weight) continue;
        const double gain = 0.5 * (score_term(g_left, h_left, cfg) +
                                   score_term(g_right, h_right, cfg) - parent_term);
        if (gain > best.gain) {
          best.feature = static_cast<int>(col);
          best.threshold = 0.5 * (value + next);
          best.gain = gain;
        }
      }
    }

    if (best.feature >= 0 && best.gain <= 0.0) {
      const auto& rows = order[0];
      const double first = g[rows[static_cast<std::size_t>(begin)]];
      bool mixed_gradients = false;
      for (Index i = begin + 1; i < end && !mixed_gradients; ++i) {
        mixed_gradients = g[rows[static_cast<std::size_t>(i)]] != first;
      }
      if (best.gain < 0.0 || !mixed_gradients) best = SplitChoice{};
    }
    return best;
  }

  /// Stable-partitions every column slice by the split predicate and returns
  /// the boundary position plus the left child's gradient/hessian sums.
  struct Partition {
    Index mid = 0;
    double g_left = 0.0;
    double h_left = 0.0;
  };
  Partition apply_split(Index begin, Index end, const SplitChoice& split) {
    Partition part;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto& sorted = order[c];
      Index left_at = begin;
      Index right_at = 0;
      for (Index i = begin; i < end; ++i) {
        const Index row = sorted[static_cast<std::size_t>(i)];
        if (features(row, split.feature) < split.threshold) {
          sorted[static_cast<std::size_t>(left_at++)] = row;
          if (c == 0) {
            part.g_left += g[row];
            part.h_left += h[row];
          }
        } else {
          scratch[static_cast<std::size_t>(right_at++)] = row;
        }
      }
      std::copy(scratch.begin(), scratch.begin() + right_at,
                sorted.begin() + left_at);
      part.mid = left_at;
    }
    return part;
  }
};

struct BuildNode {
  int arena = 0;
  int depth = 0;
  Index begin = 0;
  Index end = 0;
  double g_sum = 0.0;
  double h_sum = 0.0;
  SplitChoice split;
};

Tree grow_tree(TreeBuilder& builder, const BuildNode& seed);

/// Per-fit cache of every column's (value, row)-sorted order over the whole
/// training set. A round's in-bag subset is a subsequence of that order, so
/// filtering replaces the per-tree sort with a linear scan.
class PresortCache {
 public:
  explicit PresortCache(const ConstMatrixRef& features) : n_(features.rows()) {
    full_.resize(static_cast<std::size_t>(features.cols()));
    for (Index col = 0; col < features.cols(); ++col) {
      auto& sorted = full_[static_cast<std::size_t>(col)];
      sorted.resize(static_cast<std::size_t>(n_));
      std::iota(sorted.begin(), sorted.end(), Index{0});
      std::sort(sorted.begin(), sorted.end(), [&](Index a, Index b) {
        const double va = features(a, col), vb = features(b, col);
        return va < vb || (va == vb && a < b);
      });
    }
  }

  std::vector<std::vector<Index>> filter(std::span<const Index> rows,
                                         std::span<const Index> cols) const {
    std::vector<std::vector<Index>> orders(cols.size());
    if (static_cast<Index>(rows.size()) == n_) {  // no row subsampling
      for (std::size_t c = 0; c < cols.size(); ++c) {
        orders[c] = full_[static_cast<std::size_t>(cols[c])];
      }
      return orders;
    }
    std::vector<char> in_bag(static_cast<std::size_t>(n_), 0);
    for (const Index r : rows) in_bag[static_cast<std::size_t>(r)] = 1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& full = full_[static_cast<std::size_t>(cols[c])];
      auto& order = orders[c];
      order.reserve(rows.size());
      for (const Index r : full) {
        if (in_bag[static_cast<std::size_t>(r)]) order.push_back(r);
      }
    }
    return orders;
  }

 private:
  Index n_;
  std::vector<std::vector<Index>> full_;
};

BuildNode seed_node(const Vector& gradients, const Vector& hessians,
                    std::span<const Index> rows) {
  BuildNode root;
  root.end = static_cast<Index>(rows.size());
  for (const Index r : rows) {
    root.g_sum += gradients[r];
    root.h_sum += hessians[r];
  }
  return root;
}

}  // namespace

Tree fit_boosting_tree(const ConstMatrixRef& features, const Vector& gradients,
                       const Vector& hessians, const GbdtConfig& cfg,
                       std::span<const Index> rows, std::span<const Index> cols) {
  const BuildNode root = seed_node(gradients, hessians, rows);
  if (cols.empty() || rows.empty()) {
    Tree tree;
    tree.nodes.emplace_back();
    tree.nodes[0].value = leaf_weight(root.g_sum, root.h_sum, cfg);
    return tree;
  }
  TreeBuilder builder(features, gradients, hessians, cfg, rows, cols);
  return grow_tree(builder, root);
}

namespace {

Tree grow_tree(TreeBuilder& builder, const BuildNode& seed) {
  const GbdtConfig& cfg = builder.cfg;
  Tree tree;
  tree.nodes.emplace_back();
  BuildNode root = seed;

  const auto splittable = [&](const BuildNode& node) {
    return node.depth < cfg.max_depth &&
           node.end - node.begin >= static_cast<Index>(cfg.min_samples_split);
  };
  const auto make_leaf = [&](const BuildNode& node) {
    tree.nodes[static_cast<std::size_t>(node.arena)].value =
        leaf_weight(node.g_sum, node.h_sum, cfg);
  };
  const auto expand = [&](const BuildNode& node, auto&& enqueue) {
    TreeNode& arena_node = tree.nodes[static_cast<std::size_t>(node.arena)];
    arena_node.feature = node.split.feature;
    arena_node.threshold = node.split.threshold;
    arena_node.gain = node.split.gain;
    arena_node.left = static_cast<int>(tree.nodes.size());
    arena_node.right = arena_node.left + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();

    const auto part = builder.apply_split(node.begin, node.end, node.split);
    BuildNode left, right;
    left.arena = tree.nodes[static_cast<std::size_t>(node.arena)].left;
    right.arena = tree.nodes[static_cast<std::size_t>(node.arena)].right;
    left.depth = right.depth = node.depth + 1;
    left.begin = node.begin;
    left.end = right.begin = part.mid;
    right.end = node.end;
    left.g_sum = part.g_left;
    left.h_sum = part.h_left;
    right.g_sum = node.g_sum - part.g_left;
    right.h_sum = node.h_sum - part.h_left;
    enqueue(std::move(left));
    enqueue(std::move(right));
  };

  if (cfg.growth == Growth::depthwise) {
    std::vector<BuildNode> frontier;
    frontier.push_back(root);
    while (!frontier.empty()) {
      BuildNode node = frontier.back();
      frontier.pop_back();
      if (splittable(node)) {
        node.split = builder.best_split(node.begin, node.end, node.g_sum, node.h_sum);
      }
      if (node.split.found()) {
        expand(node, [&](BuildNode&& child) { frontier.push_back(child); });
      } else {
        make_leaf(node);
      }
    }
  } else {
    // Leaf-wise: always expand the highest-gain leaf next; lower arena index
    // wins ties so growth order is deterministic.
    const auto better = [](const BuildNode& a, const BuildNode& b) {
      if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
      return a.arena > b.arena;
    };
    std::vector<BuildNode> heap;
    const auto enqueue = [&](BuildNode&& node) {
      if (splittable(node)) {
        node.split = builder.best_split(node.begin, node.end, node.g_sum, node.h_sum);
      }
      if (!node.split.found()) {
        make_leaf(node);
        return;
      }
      heap.push_back(node);
      std::push_heap(heap.begin(), heap.end(), better);
    };

    int leaves = 1;
    enqueue(std::move(root));
    while (!heap.empty()) {
      if (cfg.num_leaves && leaves >= *cfg.num_leaves) break;
      std::pop_heap(heap.begin(), heap.end(), better);
      const BuildNode node = heap.back();
      heap.pop_back();
      expand(node, enqueue);
      ++leaves;  // one leaf became two
    }
    for (const auto& node : heap) make_leaf(node);  // cap reached: leftovers stay leaves
  }
  return tree;
}

double logloss(const Vector& y, const Vector& margin) {
  double total = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double p = std::clamp(1.0 / (1.0 + std::exp(-margin[i])), 1e-15, 1.0 - 1e-15);
    total += y[i] > 0.5 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(y.size());
}

std::vector<Index> subsample_indices(Index n, double fraction, Rng stream) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  if (fraction >= 1.0) return all;
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  stream.shuffle(all);
  all.resize(std::min(keep, all.size()));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TrainedModel fit_gbdt(const data::Table& t, const GbdtConfig& cfg) {
  cfg.validate();
  const auto counts = data::class_counts(t);
  if (counts[0] == 0 || counts[1] == 0) {
    throw SingleClassInputError("boosting requires both classes present, got " +
                                std::to_string(counts[0]) + "/" +
                                std::to_string(counts[1]));
  }

  data::Table train = t;
  data::Table val;
  const bool early = cfg.early_stopping_rounds.has_value();
  if (early) {
    auto [tr, va] = data::stratified_split(t, cfg.validation_fraction,
                                           derive_seed(cfg.seed, kValSplitKey));
    train = std::move(tr);
    val = std::move(va);
  }

  TrainedModel model;
  model.kind = ModelKind::gbdt;
  model.gbdt_config = cfg;
  model.n_features = t.col_count();

  const Index n = train.row_count();
  const Index d = train.col_count();
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = train.labels[i];
  const double pos_rate = y.sum() / static_cast<double>(n);
  model.base_score = std::log(pos_rate / (1.0 - pos_rate));

  Vector margin = Vector::Constant(n, model.base_score);
  Vector val_margin = Vector::Constant(val.row_count(), model.base_score);
  Vector val_y(val.row_count());
  for (Index i = 0; i < val.row_count(); ++i) val_y[i] = val.labels[i];

  // Sort every column once up front; each round's builder reuses the order
  // restricted to that round's in-bag rows and sampled columns.
  const ConstMatrixRef train_features(train.features);
  const PresortCache presort(train_features);

  double best_val = std::numeric_limits<double>::infinity();
  int best_round = 0;
  int rounds_since_best = 0;

  for (int round = 0; round < cfg.n_estimators; ++round) {
    Vector p(n), g(n), h(n);
    for (Index i = 0; i < n; ++i) {
      p[i] = 1.0 / (1.0 + std::exp(-margin[i]));
      g[i] = p[i] - y[i];
      h[i] = cfg.order == BoostOrder::second ? p[i] * (1.0 - p[i]) : 1.0;
    }

    const auto rows =
        subsample_indices(n, cfg.subsample, Rng(derive_seed(cfg.seed, row_key(round))));
    std::vector<Index> cols(static_cast<std::size_t>(d));
    for (Index c = 0; c < d; ++c) cols[static_cast<std::size_t>(c)] = c;
    if (cfg.colsample < 1.0) {
      Rng col_stream(derive_seed(cfg.seed, col_key(round)));
      col_stream.shuffle(cols);
      const auto keep = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(cfg.colsample * static_cast<double>(d))));
      cols.resize(std::min(keep, cols.size()));
      std::sort(cols.begin(), cols.end());
    }

    TreeBuilder builder(train_features, g, h, cfg, cols, presort.filter(rows, cols));
    Tree tree = grow_tree(builder, seed_node(g, h, rows));

    if (cfg.order == BoostOrder::first) {
      // Newton relabel: structure was fit with unit hessians; leaf values use
      // the true logistic hessian over in-bag rows.
      std::vector<double> leaf_g(tree.nodes.size(), 0.0), leaf_h(tree.nodes.size(), 0.0);
      for (const Index r : rows) {
        const auto leaf = static_cast<std::size_t>(tree.leaf_index(train.features, r));
        leaf_g[leaf] += g[r];
        leaf_h[leaf] += p[r] * (1.0 - p[r]);
      }
      for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].is_leaf()) {
          tree.nodes[i].value = leaf_weight(leaf_g[i], leaf_h[i], cfg);
        }
      }
    }

    for (Index i = 0; i < n; ++i) {
      margin[i] += cfg.learning_rate * tree.leaf(train.features, i).value;
    }
    for (Index i = 0; i < val.row_count(); ++i) {
      val_margin[i] += cfg.learning_rate * tree.leaf(val.features, i).value;
    }
    model.trees.push_back(std::move(tree));
    model.train_loss.push_back(logloss(y, margin));

    if (early) {
      const double vl = logloss(val_y, val_margin);
      model.validation_loss.push_back(vl);
      if (vl < best_val) {
        best_val = vl;
        best_round = round;
        rounds_since_best = 0;
      } else if (++rounds_since_best >= *cfg.early_stopping_rounds) {
        break;
      }
    }
    // Loss floor: the model is already (numerically) perfect on its training
    // data; further rounds only burn time. Matters for presets with huge
    // n_estimators.
    if (model.train_loss.back() <= 1e-12) {
      if (early) best_round = static_cast<int>(model.trees.size()) - 1;
      break;
    }
  }

  model.best_iteration = early ? best_round + 1 : static_cast<int>(model.trees.size());
  return model;
}

}  // namespace imbtab::learners
