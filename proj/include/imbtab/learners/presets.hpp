#pragma once

#include <string>
#include <variant>
#include <vector>

#include "imbtab/data/table.hpp"
#include "imbtab/learners/gbdt.hpp"
#include "imbtab/learners/model.hpp"

namespace imbtab::learners {

/// A named reference configuration is either a boosting config or a forest
/// config; fit_model dispatches on the alternative.
using PresetConfig = std::variant<GbdtConfig, EtcConfig>;

/// Canonical preset names in report-row order:
/// xgb-paper, lgbm-paper, etc-paper, catboost-paper, gbc-paper.
const std::vector<std::string>& preset_names();

/// Reference configuration for a canonical name; the "-paper" suffix may be
/// omitted. Throws Error for unknown names.
PresetConfig preset(const std::string& name);

/// Display label for report rows ("XGB", "LGBM", "ETC", "CatBoost", "GBC").
std::string preset_label(const std::string& name);

/// Copy of cfg with every seed field replaced.
PresetConfig with_seed(PresetConfig cfg, std::uint64_t seed);

/// Trains whichever model kind the config describes. jobs only affects
/// wall-clock time, never the model.
TrainedModel fit_model(const data::Table& t, const PresetConfig& cfg, int jobs = 1);

}  // namespace imbtab::learners
