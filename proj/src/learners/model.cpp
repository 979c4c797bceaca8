#include "imbtab/learners/model.hpp"

#include <cmath>
#include <string>

#include "imbtab/core/error.hpp"

namespace imbtab::learners {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error("invalid config: " + message);
}

}  // namespace

void GbdtConfig::validate() const {
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(n_estimators >= 1, "n_estimators must be at least 1");
  require(max_depth >= 1, "max_depth must be at least 1");
  require(!num_leaves || *num_leaves >= 2, "num_leaves must be at least 2");
  require(min_child_weight >= 0.0, "min_child_weight must be non-negative");
  require(min_samples_split >= 2, "min_samples_split must be at least 2");
  require(subsample > 0.0 && subsample <= 1.0, "subsample must be in (0, 1]");
  require(colsample > 0.0 && colsample <= 1.0, "colsample must be in (0, 1]");
  require(l1_alpha >= 0.0, "l1_alpha must be non-negative");
  require(l2_lambda >= 0.0, "l2_lambda must be non-negative");
  require(!early_stopping_rounds || *early_stopping_rounds >= 1,
          "early_stopping_rounds must be at least 1");
  require(validation_fraction > 0.0 && validation_fraction < 1.0,
          "validation_fraction must be in (0, 1)");
}

void EtcConfig::validate() const {
  require(n_estimators >= 1, "n_estimators must be at least 1");
  require(min_samples_split >= 2, "min_samples_split must be at least 2");
  require(!max_features || (*max_features > 0.0 && *max_features <= 1.0),
          "max_features must be in (0, 1]");
}

Matrix predict_proba(const TrainedModel& m, const ConstMatrixRef& rows) {
  if (rows.cols() != m.n_features) {
    throw ShapeMismatchError("model expects " + std::to_string(m.n_features) +
                             " features, got " + std::to_string(rows.cols()));
  }
  const Index n = rows.rows();
  Matrix proba(n, 2);
  if (m.kind == ModelKind::gbdt) {
    const auto used = static_cast<std::size_t>(m.best_iteration);
    for (Index i = 0; i < n; ++i) {
      double margin = m.base_score;
      for (std::size_t t = 0; t < used && t < m.trees.size(); ++t) {
        margin += m.gbdt_config.learning_rate * m.trees[t].leaf(rows, i).value;
      }
      const double p1 = 1.0 / (1.0 + std::exp(-margin));
      proba(i, 0) = 1.0 - p1;
      proba(i, 1) = p1;
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      double p1 = 0.0;
      for (const Tree& tree : m.trees) p1 += tree.leaf(rows, i).p1;
      p1 /= static_cast<double>(m.trees.size());
      proba(i, 0) = 1.0 - p1;
      proba(i, 1) = p1;
    }
  }
  return proba;
}

IntVector predict_label(const TrainedModel& m, const ConstMatrixRef& rows) {
  const Matrix proba = predict_proba(m, rows);
  IntVector labels(proba.rows());
  for (Index i = 0; i < proba.rows(); ++i) {
    labels[i] = proba(i, 1) >= proba(i, 0) ? 1 : 0;
  }
  return labels;
}

Vector feature_importance(const TrainedModel& m) {
  Vector totals = Vector::Zero(m.n_features);
  const std::size_t used = m.kind == ModelKind::gbdt
                               ? static_cast<std::size_t>(m.best_iteration)
                               : m.trees.size();
  for (std::size_t t = 0; t < used && t < m.trees.size(); ++t) {
    for (const TreeNode& node : m.trees[t].nodes) {
      if (!node.is_leaf()) totals[node.feature] += node.gain;
    }
  }
  const double sum = totals.sum();
  if (sum > 0.0) totals /= sum;
  return totals;
}

}  // namespace imbtab::learners
