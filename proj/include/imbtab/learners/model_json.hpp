#pragma once

#include "imbtab/learners/model.hpp"
#include "json.hpp"

namespace imbtab::learners {

/// Whole model as one ordered JSON document: kind, config snapshot,
/// base_score, best_iteration, feature count, and per-tree node arrays.
/// Fixed key order makes equal models serialize to identical bytes.
nlohmann::ordered_json model_to_json(const TrainedModel& m);

/// Inverse of model_to_json; validates the config and tree structure.
TrainedModel model_from_json(const nlohmann::ordered_json& doc);

}  // namespace imbtab::learners
