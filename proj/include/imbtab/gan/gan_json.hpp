#pragma once

#include "imbtab/gan/gan.hpp"
#include "json.hpp"

namespace imbtab::gan {

/// Trained GAN as an ordered JSON document: config, feature transform, both
/// networks' parameters, and the training trace. Key order is fixed, so equal
/// models serialize to identical bytes.
nlohmann::ordered_json gan_to_json(const GanModel& m);

/// Inverse of gan_to_json; validates layer shapes and enum fields.
GanModel gan_from_json(const nlohmann::ordered_json& doc);

/// Fidelity gaps as a flat JSON object (per-column deltas plus the worst-case
/// scalars and their sum).
nlohmann::ordered_json fidelity_to_json(const FidelityReport& r);

}  // namespace imbtab::gan
