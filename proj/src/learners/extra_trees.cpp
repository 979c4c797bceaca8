#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"
#include "imbtab/learners/gbdt.hpp"

namespace imbtab::learners {
namespace {

double gini(double n0, double n1) {
  const double n = n0 + n1;
  if (n == 0.0) return 0.0;
  const double f0 = n0 / n, f1 = n1 / n;
  return 1.0 - f0 * f0 - f1 * f1;
}

Tree build_extra_tree(const data::Table& t, const EtcConfig& cfg, int candidates,
                      Rng rng) {
  const Index d = t.col_count();
  const double total = static_cast<double>(t.row_count());

  Tree tree;
  tree.nodes.emplace_back();

  struct Pending {
    int arena;
    std::vector<Index> rows;
  };
  std::vector<Pending> stack;
  {
    std::vector<Index> all(static_cast<std::size_t>(t.row_count()));
    for (Index i = 0; i < t.row_count(); ++i) all[static_cast<std::size_t>(i)] = i;
    stack.push_back({0, std::move(all)});
  }

  std::vector<Index> features(static_cast<std::size_t>(d));
  for (Index c = 0; c < d; ++c) features[static_cast<std::size_t>(c)] = c;

  while (!stack.empty()) {
    Pending node = std::move(stack.back());
    stack.pop_back();

    const double n = static_cast<double>(node.rows.size());
    double pos = 0.0;
    for (const Index r : node.rows) pos += t.labels[r];
    const double parent_impurity = gini(n - pos, pos);

    TreeNode& arena_node = tree.nodes[static_cast<std::size_t>(node.arena)];
    const bool stop = parent_impurity == 0.0 ||
                      node.rows.size() < static_cast<std::size_t>(cfg.min_samples_split);

    int best_feature = -1;
    double best_threshold = 0.0, best_decrease = -1.0;
    if (!stop) {
      // One uniform threshold per candidate feature; candidates are the first
      // non-constant entries of a freshly shuffled feature list.
      rng.shuffle(features);
      int tried = 0;
      for (const Index col : features) {
        if (tried == candidates) break;
        double lo = t.features(node.rows.front(), col), hi = lo;
        for (const Index r : node.rows) {
          lo = std::min(lo, t.features(r, col));
          hi = std::max(hi, t.features(r, col));
        }
        if (lo == hi) continue;  // constant here; does not use up a candidate
        ++tried;
        // uniform_pos keeps the threshold in (lo, hi], so both children are
        // guaranteed at least one row and the recursion always terminates.
        const double threshold = lo + rng.uniform_pos() * (hi - lo);
        double left_n = 0.0, left_pos = 0.0;
        for (const Index r : node.rows) {
          if (t.features(r, col) < threshold) {
            left_n += 1.0;
            left_pos += t.labels[r];
          }
        }
        const double right_n = n - left_n;
        const double right_pos = pos - left_pos;
        const double decrease = parent_impurity -
                                (left_n / n) * gini(left_n - left_pos, left_pos) -
                                (right_n / n) * gini(right_n - right_pos, right_pos);
        if (decrease > best_decrease) {
          best_feature = static_cast<int>(col);
          best_threshold = threshold;
          best_decrease = decrease;
        }
      }
    }

    if (best_feature < 0) {
      arena_node.p0 = (n - pos) / n;
      arena_node.p1 = pos / n;
      continue;
    }

    arena_node.feature = best_feature;
    arena_node.threshold = best_threshold;
    arena_node.gain = (n / total) * best_decrease;
    arena_node.left = static_cast<int>(tree.nodes.size());
    arena_node.right = arena_node.left + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();

    Pending left{tree.nodes[static_cast<std::size_t>(node.arena)].left, {}};
    Pending right{tree.nodes[static_cast<std::size_t>(node.arena)].right, {}};
    for (const Index r : node.rows) {
      (t.features(r, best_feature) < best_threshold ? left : right).rows.push_back(r);
    }
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));  // left subtree grows (and draws) first
  }
  return tree;
}

}  // namespace

TrainedModel fit_extra_trees(const data::Table& t, const EtcConfig& cfg, int jobs) {
  cfg.validate();
  const auto counts = data::class_counts(t);
  if (counts[0] == 0 || counts[1] == 0) {
    throw SingleClassInputError("forest requires both classes present, got " +
                                std::to_string(counts[0]) + "/" +
                                std::to_string(counts[1]));
  }

  const Index d = t.col_count();
  int candidates = cfg.max_features
                       ? static_cast<int>(std::llround(*cfg.max_features *
                                                       static_cast<double>(d)))
                       : static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  candidates = std::clamp(candidates, 1, static_cast<int>(d));

  TrainedModel model;
  model.kind = ModelKind::extra_trees;
  model.etc_config = cfg;
  model.n_features = d;
  model.trees.resize(static_cast<std::size_t>(cfg.n_estimators));
  model.best_iteration = cfg.n_estimators;

  const auto build = [&](int index) {
    model.trees[static_cast<std::size_t>(index)] = build_extra_tree(
        t, cfg, candidates, Rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index))));
  };

  if (jobs <= 1) {
    for (int i = 0; i < cfg.n_estimators; ++i) build(i);
  } else {
    // Each tree depends only on (seed, index), so work-stealing over a shared
    // counter reproduces the sequential model for any thread count.
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int count = std::min(jobs, cfg.n_estimators);
    workers.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (int i = next.fetch_add(1); i < cfg.n_estimators; i = next.fetch_add(1)) {
          build(i);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }
  return model;
}

}  // namespace imbtab::learners
