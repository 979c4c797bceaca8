#pragma once

#include <span>

#include "imbtab/data/table.hpp"
#include "imbtab/learners/model.hpp"

namespace imbtab::learners {

/// Fits one regression tree to (gradients, hessians) by exact greedy search
/// over the given rows and (ascending) candidate columns. Split gain is the
/// second-order formula with L1 soft-thresholding on gradient sums and L2 on
/// hessian sums; ties resolve to the lowest feature index, then the lowest
/// threshold. Degenerate input yields a single leaf.
Tree fit_boosting_tree(const ConstMatrixRef& features, const Vector& gradients,
                       const Vector& hessians, const GbdtConfig& cfg,
                       std::span<const Index> rows, std::span<const Index> cols);

/// Gradient-boosted trees on logistic loss. Second order uses g = p - y,
/// h = p(1-p); first order fits each tree to the residual with unit hessians
/// and then applies a Newton step per leaf. With early_stopping_rounds set, a
/// stratified validation_fraction is held out and training stops once
/// validation logloss stops improving for that many rounds; best_iteration
/// records the round count actually used for prediction.
TrainedModel fit_gbdt(const data::Table& t, const GbdtConfig& cfg);

/// Extremely randomized trees: full sample per tree, uniform-random threshold
/// per candidate feature, best Gini decrease wins. jobs > 1 parallelizes over
/// trees; per-tree counter-derived RNG streams keep the model identical for
/// any thread count.
TrainedModel fit_extra_trees(const data::Table& t, const EtcConfig& cfg, int jobs = 1);

}  // namespace imbtab::learners
