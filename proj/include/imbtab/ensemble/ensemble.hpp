#pragma once

#include <vector>

#include "imbtab/core/types.hpp"
#include "imbtab/learners/model.hpp"

namespace imbtab::ensemble {

enum class VoteMode { soft, hard };

/// Weighted voting committee over trained models. Weights are raw per-model
/// weighted-F1 scores; voting is scale-invariant, so no normalization.
struct EnsembleModel {
  std::vector<learners::TrainedModel> members;
  std::vector<double> weights;
  VoteMode mode = VoteMode::soft;

  /// Throws Error on size mismatch, empty committee, negative weights,
  /// all-zero weights, or disagreeing feature counts.
  void validate() const;
};

/// Voting weights from per-model scores: the scores verbatim. Scores must lie
/// in [0, 1]; throws AllZeroScoresError when none is positive.
std::vector<double> derive_weights(const std::vector<double>& member_scores);

struct SoftVote {
  Matrix proba;      // rows x 2, convex combination of member probabilities
  IntVector labels;  // argmax, ties to class 1
};

/// P(class) = sum(w_m * p_m(class)) / sum(w_m), label = argmax (tie -> 1).
SoftVote vote_soft(const std::vector<learners::TrainedModel>& members,
                   const std::vector<double>& weights, const ConstMatrixRef& rows);

/// Per-row label = argmax over classes of the weighted member vote count,
/// ties to class 1.
IntVector vote_hard(const std::vector<learners::TrainedModel>& members,
                    const std::vector<double>& weights, const ConstMatrixRef& rows);

struct EnsemblePrediction {
  Matrix proba;  // empty (0 x 0) under hard voting
  IntVector labels;
};

/// Dispatches on m.mode after validating m.
EnsemblePrediction predict(const EnsembleModel& m, const ConstMatrixRef& rows);

}  // namespace imbtab::ensemble
