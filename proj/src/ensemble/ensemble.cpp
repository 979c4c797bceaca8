#include "imbtab/ensemble/ensemble.hpp"

#include <algorithm>
#include <string>

#include "imbtab/core/error.hpp"

namespace imbtab::ensemble {
namespace {

void check_committee(std::size_t members, const std::vector<double>& weights) {
  if (members == 0) throw EmptyInputError("ensemble needs at least one member");
  if (members != weights.size()) {
    throw LengthMismatchError("ensemble has " + std::to_string(members) +
                              " members but " + std::to_string(weights.size()) +
                              " weights");
  }
  bool any_positive = false;
  for (const double w : weights) {
    if (w < 0.0) throw Error("ensemble weights must be non-negative");
    any_positive |= w > 0.0;
  }
  if (!any_positive) throw AllZeroScoresError("all ensemble weights are zero");
}

}  // namespace

void EnsembleModel::validate() const {
  check_committee(members.size(), weights);
  for (const auto& member : members) {
    if (member.n_features != members.front().n_features) {
      throw ShapeMismatchError("ensemble members disagree on feature count");
    }
  }
}

std::vector<double> derive_weights(const std::vector<double>& member_scores) {
  if (member_scores.empty()) throw EmptyInputError("no member scores");
  bool any_positive = false;
  for (const double s : member_scores) {
    if (s < 0.0 || s > 1.0) {
      throw Error("member score outside [0, 1]: " + std::to_string(s));
    }
    any_positive |= s > 0.0;
  }
  if (!any_positive) throw AllZeroScoresError("all member scores are zero");
  return member_scores;
}

SoftVote vote_soft(const std::vector<learners::TrainedModel>& members,
                   const std::vector<double>& weights, const ConstMatrixRef& rows) {
  check_committee(members.size(), weights);
  double total = 0.0;
  for (const double w : weights) total += w;

  Matrix proba = Matrix::Zero(rows.rows(), 2);
  for (std::size_t m = 0; m < members.size(); ++m) {
    proba += (weights[m] / total) * learners::predict_proba(members[m], rows);
  }

  SoftVote vote;
  vote.labels.resize(rows.rows());
  for (Index i = 0; i < rows.rows(); ++i) {
    vote.labels[i] = proba(i, 1) >= proba(i, 0) ? 1 : 0;
  }
  vote.proba = std::move(proba);
  return vote;
}

IntVector vote_hard(const std::vector<learners::TrainedModel>& members,
                    const std::vector<double>& weights, const ConstMatrixRef& rows) {
  check_committee(members.size(), weights);
  Vector tally_one = Vector::Zero(rows.rows());
  Vector tally_zero = Vector::Zero(rows.rows());
  for (std::size_t m = 0; m < members.size(); ++m) {
    const IntVector votes = learners::predict_label(members[m], rows);
    for (Index i = 0; i < rows.rows(); ++i) {
      (votes[i] == 1 ? tally_one : tally_zero)[i] += weights[m];
    }
  }
  IntVector labels(rows.rows());
  for (Index i = 0; i < rows.rows(); ++i) {
    labels[i] = tally_one[i] >= tally_zero[i] ? 1 : 0;
  }
  return labels;
}

EnsemblePrediction predict(const EnsembleModel& m, const ConstMatrixRef& rows) {
  m.validate();
  EnsemblePrediction out;
  if (m.mode == VoteMode::soft) {
    auto vote = vote_soft(m.members, m.weights, rows);
    out.proba = std::move(vote.proba);
    out.labels = std::move(vote.labels);
  } else {
    out.labels = vote_hard(m.members, m.weights, rows);
  }
  return out;
}

}  // namespace imbtab::ensemble
