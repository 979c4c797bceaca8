#pragma once

#include <string>
#include <vector>

#include "imbtab/ensemble/ensemble.hpp"
#include "json.hpp"

namespace imbtab::ensemble {

/// On-disk description of a committee: the member model files it references
/// plus the weights and voting mode. Member models are stored separately via
/// their own serialization.
struct EnsembleManifest {
  std::vector<std::string> member_files;
  std::vector<double> weights;
  VoteMode mode = VoteMode::soft;
};

nlohmann::ordered_json manifest_to_json(const EnsembleManifest& m);

/// Inverse of manifest_to_json; rejects size mismatches and unknown modes.
EnsembleManifest manifest_from_json(const nlohmann::ordered_json& doc);

}  // namespace imbtab::ensemble
