#include "imbtab/ensemble/ensemble_json.hpp"

#include "imbtab/core/error.hpp"

namespace imbtab::ensemble {

using nlohmann::ordered_json;

ordered_json manifest_to_json(const EnsembleManifest& m) {
  ordered_json j;
  j["members"] = m.member_files;
  j["weights"] = m.weights;
  j["mode"] = m.mode == VoteMode::soft ? "soft" : "hard";
  return j;
}

EnsembleManifest manifest_from_json(const ordered_json& doc) {
  EnsembleManifest m;
  m.member_files = doc.at("members").get<std::vector<std::string>>();
  m.weights = doc.at("weights").get<std::vector<double>>();
  const std::string mode = doc.at("mode");
  if (mode == "soft") {
    m.mode = VoteMode::soft;
  } else if (mode == "hard") {
    m.mode = VoteMode::hard;
  } else {
    throw Error("unknown vote mode: " + mode);
  }
  if (m.member_files.size() != m.weights.size()) {
    throw LengthMismatchError("manifest members/weights size mismatch");
  }
  if (m.member_files.empty()) throw EmptyInputError("manifest has no members");
  return m;
}

}  // namespace imbtab::ensemble
