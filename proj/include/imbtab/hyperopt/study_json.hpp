#pragma once

#include "imbtab/hyperopt/hyperopt.hpp"
#include "json.hpp"

namespace imbtab::hyperopt {

/// Full study state as an ordered JSON document: config plus every trial with
/// params (value and the spec it was drawn under), intermediate reports,
/// state, and final value. Key order is fixed, so equal studies serialize to
/// identical bytes.
nlohmann::ordered_json study_to_json(const Study& study);

/// Inverse of study_to_json; validates trial invariants while appending.
Study study_from_json(const nlohmann::ordered_json& doc);

}  // namespace imbtab::hyperopt
