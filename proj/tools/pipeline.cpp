#include "pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <utility>
#include <variant>

#include "imbtab/core/error.hpp"
#include "imbtab/data/csv.hpp"

namespace imbtab::cli {
namespace {

using nlohmann::ordered_json;

double as_double(const std::string& name, const hyperopt::ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error("parameter " + name + " must be numeric");
}

int as_int(const std::string& name, const hyperopt::ParamValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<int>(*i);
  throw Error("parameter " + name + " must be an integer");
}

std::string as_string(const std::string& name, const hyperopt::ParamValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw Error("parameter " + name + " must be categorical");
}

void apply_gbdt_param(learners::GbdtConfig& cfg, const std::string& name,
                      const hyperopt::ParamValue& v) {
  if (name == "learning_rate") cfg.learning_rate = as_double(name, v);
  else if (name == "n_estimators") cfg.n_estimators = as_int(name, v);
  else if (name == "max_depth") cfg.max_depth = as_int(name, v);
  else if (name == "num_leaves") cfg.num_leaves = as_int(name, v);
  else if (name == "min_child_weight") cfg.min_child_weight = as_double(name, v);
  else if (name == "min_samples_split") cfg.min_samples_split = as_int(name, v);
  else if (name == "subsample") cfg.subsample = as_double(name, v);
  else if (name == "colsample") cfg.colsample = as_double(name, v);
  else if (name == "l1_alpha") cfg.l1_alpha = as_double(name, v);
  else if (name == "l2_lambda") cfg.l2_lambda = as_double(name, v);
  else if (name == "early_stopping_rounds") cfg.early_stopping_rounds = as_int(name, v);
  else if (name == "validation_fraction") cfg.validation_fraction = as_double(name, v);
  else throw Error("unknown boosting parameter: " + name);
}

void apply_etc_param(learners::EtcConfig& cfg, const std::string& name,
                     const hyperopt::ParamValue& v) {
  if (name == "n_estimators") cfg.n_estimators = as_int(name, v);
  else if (name == "min_samples_split") cfg.min_samples_split = as_int(name, v);
  else if (name == "max_features") {
    // A fraction of columns, or the literal "sqrt" for the default rule.
    if (std::holds_alternative<std::string>(v)) {
      if (as_string(name, v) != "sqrt") throw Error("max_features must be a fraction or \"sqrt\"");
      cfg.max_features.reset();
    } else {
      cfg.max_features = as_double(name, v);
    }
  } else {
    throw Error("unknown forest parameter: " + name);
  }
}

ordered_json smote_to_json(const smote::SmoteConfig& cfg) {
  ordered_json j;
  j["k_neighbors"] = cfg.k_neighbors;
  j["standardize_distances"] = cfg.standardize_distances;
  return j;
}

ordered_json gan_cfg_to_json(const gan::GanConfig& cfg) {
  ordered_json j;
  j["epochs"] = cfg.epochs;
  j["generator_dims"] = cfg.generator_dims;
  j["discriminator_dims"] = cfg.discriminator_dims;
  j["embedding_dim"] = cfg.embedding_dim;
  j["generator_lr"] = cfg.generator_lr;
  j["discriminator_lr"] = cfg.discriminator_lr;
  j["batch_size"] = cfg.batch_size;
  j["variant"] = cfg.variant == gan::GanVariant::copula ? "copula" : "vanilla";
  return j;
}

void smote_from_json(const ordered_json& j, smote::SmoteConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "k_neighbors") cfg.k_neighbors = value;
    else if (key == "standardize_distances") cfg.standardize_distances = value;
    else throw Error("unknown smote config key: " + key);
  }
}

void gan_cfg_from_json(const ordered_json& j, gan::GanConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "epochs") cfg.epochs = value;
    else if (key == "generator_dims") cfg.generator_dims = value.get<std::vector<Index>>();
    else if (key == "discriminator_dims") cfg.discriminator_dims = value.get<std::vector<Index>>();
    else if (key == "embedding_dim") cfg.embedding_dim = value.get<Index>();
    else if (key == "generator_lr") cfg.generator_lr = value;
    else if (key == "discriminator_lr") cfg.discriminator_lr = value;
    else if (key == "batch_size") cfg.batch_size = value.get<Index>();
    else if (key == "variant") {
      const std::string name = value;
      if (name == "copula") cfg.variant = gan::GanVariant::copula;
      else if (name == "vanilla") cfg.variant = gan::GanVariant::vanilla;
      else throw Error("unknown gan variant: " + name);
    } else {
      throw Error("unknown gan config key: " + key);
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (policy != "none" && policy != "smote" && policy != "gan") {
    throw Error("unknown sampling policy: " + policy);
  }
  if (folds < 2) throw Error("folds must be >= 2");
  if (correlation_threshold <= 0.0 || correlation_threshold > 1.0) {
    throw Error("correlation_threshold must be in (0, 1]");
  }
  if (ensemble_mode != "soft" && ensemble_mode != "hard") {
    throw Error("ensemble_mode must be soft or hard");
  }
  if (jobs < 1) throw Error("jobs must be >= 1");
  if (holdout && (*holdout <= 0.0 || *holdout >= 1.0)) {
    throw Error("holdout fraction must be in (0, 1)");
  }
  if (smote_config.k_neighbors < 1) throw Error("k_neighbors must be >= 1");
  gan_config.validate();
}

void PipelineConfig::apply_paper_mode() {
  correlation_threshold = 0.95;
  folds = 10;
  models = learners::preset_names();
  ensemble_mode = "soft";
  smote_config = smote::SmoteConfig{};
  gan_config = gan::GanConfig{};
  holdout.reset();
}

PipelineConfig config_from_json(const nlohmann::ordered_json& doc) {
  PipelineConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "input") cfg.input = value;
    else if (key == "label_column") cfg.label_column = value;
    else if (key == "correlation_threshold") cfg.correlation_threshold = value;
    else if (key == "policy") cfg.policy = value;
    else if (key == "smote") smote_from_json(value, cfg.smote_config);
    else if (key == "gan") gan_cfg_from_json(value, cfg.gan_config);
    else if (key == "folds") cfg.folds = value;
    else if (key == "models") cfg.models = value.get<std::vector<std::string>>();
    else if (key == "ensemble_mode") cfg.ensemble_mode = value;
    else if (key == "seed") cfg.seed = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "paper_mode") cfg.paper_mode = value;
    else if (key == "jobs") cfg.jobs = value;
    else if (key == "holdout") {
      if (!value.is_null()) cfg.holdout = value.get<double>();
    } else {
      throw Error("unknown config key: " + key);
    }
  }
  return cfg;
}

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg) {
  ordered_json j;
  j["input"] = cfg.input;
  j["label_column"] = cfg.label_column;
  j["correlation_threshold"] = cfg.correlation_threshold;
  j["policy"] = cfg.policy;
  j["smote"] = smote_to_json(cfg.smote_config);
  j["gan"] = gan_cfg_to_json(cfg.gan_config);
  j["folds"] = cfg.folds;
  j["models"] = cfg.models;
  j["ensemble_mode"] = cfg.ensemble_mode;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["paper_mode"] = cfg.paper_mode;
  j["jobs"] = cfg.jobs;
  j["holdout"] = cfg.holdout ? ordered_json(*cfg.holdout) : ordered_json(nullptr);
  return j;
}

data::Table load_input(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw Error("no input file given (--input or config)");
  return data::load_csv(cfg.input, cfg.label_column);
}

metrics::SamplingPolicy sampling_policy(const PipelineConfig& cfg) {
  return sampling_policy(cfg, cfg.policy);
}

metrics::SamplingPolicy sampling_policy(const PipelineConfig& cfg,
                                        const std::string& policy_name) {
  if (policy_name == "smote") {
    auto scfg = cfg.smote_config;
    scfg.seed = cfg.seed;
    return metrics::SamplingPolicy::with_smote(scfg);
  }
  if (policy_name == "gan") {
    auto gcfg = cfg.gan_config;
    gcfg.seed = cfg.seed;
    return metrics::SamplingPolicy::with_gan(gcfg);
  }
  if (policy_name != "none") throw Error("unknown sampling policy: " + policy_name);
  return metrics::SamplingPolicy::none();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

std::string out_path(const PipelineConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("cannot write " + path);
}

nlohmann::ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path);
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
}

nlohmann::ordered_json report_to_json(const metrics::MetricsReport& r) {
  ordered_json j;
  j["accuracy"] = r.accuracy;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["weighted_f1"] = r.weighted_f1;
  j["rmse"] = r.rmse;
  j["undefined"] = r.undefined;
  return j;
}

void apply_model_param(learners::PresetConfig& cfg, const std::string& name,
                       const hyperopt::ParamValue& value) {
  if (auto* gbdt = std::get_if<learners::GbdtConfig>(&cfg)) {
    apply_gbdt_param(*gbdt, name, value);
  } else {
    apply_etc_param(std::get<learners::EtcConfig>(cfg), name, value);
  }
}

void apply_gan_param(gan::GanConfig& cfg, const std::string& name,
                     const hyperopt::ParamValue& value) {
  if (name == "epochs") cfg.epochs = as_int(name, value);
  else if (name == "embedding_dim") cfg.embedding_dim = as_int(name, value);
  else if (name == "batch_size") cfg.batch_size = as_int(name, value);
  else if (name == "generator_lr") cfg.generator_lr = as_double(name, value);
  else if (name == "discriminator_lr") cfg.discriminator_lr = as_double(name, value);
  else if (name == "variant") {
    const std::string v = as_string(name, value);
    if (v == "copula") cfg.variant = gan::GanVariant::copula;
    else if (v == "vanilla") cfg.variant = gan::GanVariant::vanilla;
    else throw Error("unknown gan variant: " + v);
  } else {
    throw Error("unknown gan parameter: " + name);
  }
}

ResolvedModel resolve_model_spec(const std::string& spec) {
  ResolvedModel out;
  out.spec = spec;
  if (spec.size() > 5 && spec.ends_with(".json")) {
    const ordered_json doc = read_json_file(spec);
    const std::string target = doc.at("target");
    if (target == "gan") {
      throw Error(spec + ": gan tuning output is not a model; use the config's gan section");
    }
    out.config = learners::preset(target);
    for (const auto& [name, value] : doc.at("best_trial").at("params").items()) {
      hyperopt::ParamValue v;
      if (value.is_number_integer()) v = value.get<std::int64_t>();
      else if (value.is_number_float()) v = value.get<double>();
      else if (value.is_string()) v = value.get<std::string>();
      else throw Error(spec + ": parameter " + name + " has an unsupported type");
      apply_model_param(out.config, name, v);
    }
    out.name = target.ends_with("-paper") ? target : target + "-paper";
    out.label = learners::preset_label(target);
    std::visit([](auto& c) { c.validate(); }, out.config);
  } else {
    out.config = learners::preset(spec);  // throws for unknown names
    out.name = spec.ends_with("-paper") ? spec : spec + "-paper";
    out.label = learners::preset_label(spec);
  }
  return out;
}

}  // namespace imbtab::cli
