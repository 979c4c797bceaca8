#include "imbtab/learners/presets.hpp"

#include "imbtab/core/error.hpp"

namespace imbtab::learners {
namespace {

// The five reference configurations, recorded verbatim where the source
// configuration names a field and mapped onto the nearest engine knob where
// it does not. Fields the source leaves unspecified keep engine defaults,
// except early stopping, which every boosting preset enables (50 rounds on a
// 10% stratified holdout) to keep the large n_estimators budgets practical.

GbdtConfig xgb_config() {
  GbdtConfig cfg;
  cfg.order = BoostOrder::second;
  cfg.growth = Growth::depthwise;
  cfg.learning_rate = 0.04;
  cfg.n_estimators = 1125;
  cfg.max_depth = 22;
  cfg.min_child_weight = 2.057;
  cfg.subsample = 0.598;
  cfg.colsample = 0.462;  // colsample_bytree
  cfg.l1_alpha = 3.627;   // alpha
  cfg.l2_lambda = 0.0015; // lambda
  cfg.early_stopping_rounds = 50;
  cfg.validation_fraction = 0.1;
  cfg.seed = 101;  // random_state
  return cfg;
}

GbdtConfig lgbm_config() {
  GbdtConfig cfg;
  cfg.order = BoostOrder::second;
  cfg.growth = Growth::leafwise;
  cfg.learning_rate = 0.136;
  cfg.n_estimators = 10049;
  cfg.max_depth = 20;
  cfg.num_leaves = 232;
  cfg.min_samples_split = 50;  // min_child_samples
  cfg.subsample = 0.624;
  cfg.colsample = 0.8;        // colsample_bytree
  cfg.l1_alpha = 8.75;        // reg_alpha
  cfg.l2_lambda = 2.179e-10;  // reg_lambda
  cfg.early_stopping_rounds = 50;
  cfg.validation_fraction = 0.1;
  return cfg;
}

EtcConfig etc_config() {
  EtcConfig cfg;
  cfg.n_estimators = 950;
  cfg.min_samples_split = 2;
  return cfg;  // max_features stays sqrt, the engine default
}

GbdtConfig catboost_config() {
  GbdtConfig cfg;
  cfg.order = BoostOrder::second;  // boosting_type 'Plain'
  cfg.growth = Growth::depthwise;
  cfg.max_depth = 11;    // depth
  cfg.colsample = 0.093; // colsample_bylevel, approximated per tree
  // learning_rate and n_estimators are unspecified in the source
  // configuration; 0.1 / 1000 mirror the reference library's stand-ins.
  // bootstrap_type 'MVS' has no counterpart here and is dropped.
  cfg.learning_rate = 0.1;
  cfg.n_estimators = 1000;
  cfg.early_stopping_rounds = 50;
  cfg.validation_fraction = 0.1;
  return cfg;
}

GbdtConfig gbc_config() {
  GbdtConfig cfg;
  cfg.order = BoostOrder::first;
  cfg.growth = Growth::depthwise;
  cfg.learning_rate = 0.211;
  cfg.n_estimators = 158;
  cfg.max_depth = 5;
  cfg.subsample = 0.8;
  cfg.early_stopping_rounds = 50;
  cfg.validation_fraction = 0.1;
  return cfg;
}

std::string canonical(const std::string& name) {
  if (name.size() >= 6 && name.compare(name.size() - 6, 6, "-paper") == 0) {
    return name.substr(0, name.size() - 6);
  }
  return name;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "xgb-paper", "lgbm-paper", "etc-paper", "catboost-paper", "gbc-paper"};
  return names;
}

PresetConfig preset(const std::string& name) {
  const std::string key = canonical(name);
  if (key == "xgb") return xgb_config();
  if (key == "lgbm") return lgbm_config();
  if (key == "etc") return etc_config();
  if (key == "catboost") return catboost_config();
  if (key == "gbc") return gbc_config();
  throw Error("unknown preset: " + name);
}

std::string preset_label(const std::string& name) {
  const std::string key = canonical(name);
  if (key == "xgb") return "XGB";
  if (key == "lgbm") return "LGBM";
  if (key == "etc") return "ETC";
  if (key == "catboost") return "CatBoost";
  if (key == "gbc") return "GBC";
  throw Error("unknown preset: " + name);
}

PresetConfig with_seed(PresetConfig cfg, std::uint64_t seed) {
  std::visit([seed](auto& c) { c.seed = seed; }, cfg);
  return cfg;
}

TrainedModel fit_model(const data::Table& t, const PresetConfig& cfg, int jobs) {
  if (const auto* gbdt = std::get_if<GbdtConfig>(&cfg)) {
    return fit_gbdt(t, *gbdt);
  }
  return fit_extra_trees(t, std::get<EtcConfig>(cfg), jobs);
}

}  // namespace imbtab::learners
