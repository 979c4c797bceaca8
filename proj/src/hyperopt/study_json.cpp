#include "imbtab/hyperopt/study_json.hpp"

#include "imbtab/core/error.hpp"

namespace imbtab::hyperopt {
namespace {

using nlohmann::ordered_json;

const char* kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::float_uniform: return "float_uniform";
    case ParamKind::float_log_uniform: return "float_log_uniform";
    case ParamKind::int_uniform: return "int_uniform";
    case ParamKind::categorical: return "categorical";
  }
  return "?";
}

ParamKind kind_from(const std::string& s) {
  if (s == "float_uniform") return ParamKind::float_uniform;
  if (s == "float_log_uniform") return ParamKind::float_log_uniform;
  if (s == "int_uniform") return ParamKind::int_uniform;
  if (s == "categorical") return ParamKind::categorical;
  throw Error("unknown parameter kind: " + s);
}

const char* state_name(TrialState s) {
  switch (s) {
    case TrialState::running: return "running";
    case TrialState::complete: return "complete";
    case TrialState::pruned: return "pruned";
    case TrialState::failed: return "failed";
  }
  return "?";
}

TrialState state_from(const std::string& s) {
  if (s == "running") return TrialState::running;
  if (s == "complete") return TrialState::complete;
  if (s == "pruned") return TrialState::pruned;
  if (s == "failed") return TrialState::failed;
  throw Error("unknown trial state: " + s);
}

ordered_json param_to_json(const ParamSpec& spec, const ParamValue& value) {
  ordered_json j;
  j["kind"] = kind_name(spec.kind);
  if (spec.kind == ParamKind::categorical) {
    j["choices"] = spec.choices;
    j["value"] = std::get<std::string>(value);
  } else if (spec.kind == ParamKind::int_uniform) {
    j["low"] = static_cast<std::int64_t>(spec.low);
    j["high"] = static_cast<std::int64_t>(spec.high);
    j["value"] = std::get<std::int64_t>(value);
  } else {
    j["low"] = spec.low;
    j["high"] = spec.high;
    j["value"] = std::get<double>(value);
  }
  return j;
}

}  // namespace

ordered_json study_to_json(const Study& study) {
  const auto& cfg = study.config();
  ordered_json doc;
  doc["direction"] = cfg.direction == Direction::maximize ? "maximize" : "minimize";
  doc["sampler"] = {
      {"kind", cfg.sampler.kind == SamplerKind::tpe ? "tpe" : "random"},
      {"n_startup", cfg.sampler.n_startup},
      {"gamma_fraction", cfg.sampler.gamma_fraction},
      {"n_ei_candidates", cfg.sampler.n_ei_candidates},
  };
  doc["pruner"] = {
      {"n_warmup_steps", cfg.pruner.n_warmup_steps},
      {"n_min_trials", cfg.pruner.n_min_trials},
  };
  doc["seed"] = cfg.seed;

  doc["trials"] = ordered_json::array();
  for (const auto& t : study.trials()) {
    ordered_json jt;
    jt["id"] = t.id;
    jt["state"] = state_name(t.state);
    if (t.final_value) jt["value"] = *t.final_value;
    if (!t.failure_reason.empty()) jt["failure_reason"] = t.failure_reason;
    jt["params"] = ordered_json::object();
    for (const auto& [name, value] : t.params) {
      jt["params"][name] = param_to_json(t.specs.at(name), value);
    }
    jt["intermediate"] = ordered_json::array();
    for (const auto& [step, v] : t.intermediate) {
      jt["intermediate"].push_back(ordered_json::array({step, v}));
    }
    doc["trials"].push_back(std::move(jt));
  }
  return doc;
}

Study study_from_json(const ordered_json& doc) {
  StudyConfig cfg;
  cfg.direction = doc.at("direction").get<std::string>() == "maximize"
                      ? Direction::maximize : Direction::minimize;
  const auto& sampler = doc.at("sampler");
  cfg.sampler.kind = sampler.at("kind").get<std::string>() == "tpe" ? SamplerKind::tpe
                                                                    : SamplerKind::random;
  cfg.sampler.n_startup = sampler.at("n_startup").get<int>();
  cfg.sampler.gamma_fraction = sampler.at("gamma_fraction").get<double>();
  cfg.sampler.n_ei_candidates = sampler.at("n_ei_candidates").get<int>();
  const auto& pruner = doc.at("pruner");
  cfg.pruner.n_warmup_steps = pruner.at("n_warmup_steps").get<int>();
  cfg.pruner.n_min_trials = pruner.at("n_min_trials").get<int>();
  cfg.seed = doc.at("seed").get<std::uint64_t>();

  Study study(cfg);
  for (const auto& jt : doc.at("trials")) {
    Trial t;
    t.id = jt.at("id").get<int>();
    t.state = state_from(jt.at("state").get<std::string>());
    if (jt.contains("value")) t.final_value = jt.at("value").get<double>();
    if (jt.contains("failure_reason")) {
      t.failure_reason = jt.at("failure_reason").get<std::string>();
    }
    for (const auto& [name, jp] : jt.at("params").items()) {
      ParamSpec spec;
      spec.name = name;
      spec.kind = kind_from(jp.at("kind").get<std::string>());
      if (spec.kind == ParamKind::categorical) {
        spec.choices = jp.at("choices").get<std::vector<std::string>>();
        t.params[name] = jp.at("value").get<std::string>();
      } else if (spec.kind == ParamKind::int_uniform) {
        spec.low = static_cast<double>(jp.at("low").get<std::int64_t>());
        spec.high = static_cast<double>(jp.at("high").get<std::int64_t>());
        t.params[name] = jp.at("value").get<std::int64_t>();
      } else {
        spec.low = jp.at("low").get<double>();
        spec.high = jp.at("high").get<double>();
        t.params[name] = jp.at("value").get<double>();
      }
      spec.validate();
      t.specs[name] = spec;
    }
    for (const auto& pair : jt.at("intermediate")) {
      t.intermediate.emplace_back(pair.at(0).get<int>(), pair.at(1).get<double>());
    }
    study.append_trial(std::move(t));
  }
  return study;
}

}  // namespace imbtab::hyperopt
