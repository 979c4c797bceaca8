#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imbtab/core/types.hpp"
#include "imbtab/learners/tree.hpp"

namespace imbtab::learners {

enum class BoostOrder { second, first };
enum class Growth { depthwise, leafwise };

struct GbdtConfig {
  BoostOrder order = BoostOrder::second;
  Growth growth = Growth::depthwise;
  double learning_rate = 0.1;
  int n_estimators = 100;
  int max_depth = 6;
  std::optional<int> num_leaves;  // leaf-wise cap; absent = depth-bounded only
  double min_child_weight = 0.0;  // minimum hessian sum per child
  int min_samples_split = 2;
  double subsample = 1.0;
  double colsample = 1.0;
  double l1_alpha = 0.0;
  double l2_lambda = 0.0;
  std::optional<int> early_stopping_rounds;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EtcConfig {
  int n_estimators = 950;
  int min_samples_split = 2;
  // Candidate features per node as a fraction of the total; absent = sqrt.
  std::optional<double> max_features;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class ModelKind { gbdt, extra_trees };

struct TrainedModel {
  ModelKind kind = ModelKind::gbdt;
  std::vector<Tree> trees;
  double base_score = 0.0;  // log-odds prior (boosting only)
  GbdtConfig gbdt_config;   // snapshot, meaningful for kind == gbdt
  EtcConfig etc_config;     // snapshot, meaningful for kind == extra_trees
  int best_iteration = 0;   // boosting trees used at prediction time
  Index n_features = 0;
  std::vector<double> train_loss;       // per-round training logloss (boosting)
  std::vector<double> validation_loss;  // per-round, present with early stopping
};

/// Per-row class probabilities, columns (P(0), P(1)); rows sum to 1.
Matrix predict_proba(const TrainedModel& m, const ConstMatrixRef& rows);

/// Hard labels: argmax probability, ties resolve to class 1.
IntVector predict_label(const TrainedModel& m, const ConstMatrixRef& rows);

/// Per-feature share of total split gain (boosting) or impurity decrease
/// (forest), normalized to sum 1; all-zero when the model never split.
Vector feature_importance(const TrainedModel& m);

}  // namespace imbtab::learners
