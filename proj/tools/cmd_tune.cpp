#include <cstdint>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "commands.hpp"
#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"
#include "imbtab/hyperopt/study_json.hpp"
#include "imbtab/learners/model.hpp"
#include "pipeline.hpp"

namespace imbtab::cli {
namespace {

using nlohmann::ordered_json;

struct SearchSpace {
  std::vector<hyperopt::ParamSpec> params;
  hyperopt::StudyConfig study;  // direction + sampler + pruner; seed set later
};

hyperopt::ParamSpec spec_from_json(const ordered_json& j) {
  const std::string name = j.at("name");
  const std::string kind = j.at("kind");
  if (kind == "float") {
    return hyperopt::ParamSpec::float_uniform(name, j.at("low"), j.at("high"));
  }
  if (kind == "log_float") {
    return hyperopt::ParamSpec::float_log_uniform(name, j.at("low"), j.at("high"));
  }
  if (kind == "int") {
    return hyperopt::ParamSpec::int_uniform(name, j.at("low"), j.at("high"));
  }
  if (kind == "categorical") {
    return hyperopt::ParamSpec::categorical(
        name, j.at("choices").get<std::vector<std::string>>());
  }
  throw Error("unknown parameter kind: " + kind);
}

/// A representative value of the spec's type, used to dry-run name/type
/// resolution against the target before any trial spends compute.
hyperopt::ParamValue probe_value(const hyperopt::ParamSpec& spec) {
  switch (spec.kind) {
    case hyperopt::ParamKind::int_uniform:
      return static_cast<std::int64_t>(spec.low);
    case hyperopt::ParamKind::categorical:
      return spec.choices.front();
    default:
      return spec.low;
  }
}

SearchSpace load_space(const std::string& path, bool gan_target,
                       const learners::PresetConfig* base) {
  const ordered_json doc = read_json_file(path);
  SearchSpace space;
  for (const auto& [key, value] : doc.items()) {
    if (key == "params") {
      for (const auto& p : value) space.params.push_back(spec_from_json(p));
    } else if (key == "direction") {
      const std::string d = value;
      if (d == "maximize") space.study.direction = hyperopt::Direction::maximize;
      else if (d == "minimize") space.study.direction = hyperopt::Direction::minimize;
      else throw Error("unknown direction: " + d);
    } else if (key == "sampler") {
      for (const auto& [k, v] : value.items()) {
        if (k == "kind") {
          const std::string s = v;
          if (s == "tpe") space.study.sampler.kind = hyperopt::SamplerKind::tpe;
          else if (s == "random") space.study.sampler.kind = hyperopt::SamplerKind::random;
          else throw Error("unknown sampler kind: " + s);
        } else if (k == "n_startup") space.study.sampler.n_startup = v;
        else if (k == "gamma_fraction") space.study.sampler.gamma_fraction = v;
        else if (k == "n_ei_candidates") space.study.sampler.n_ei_candidates = v;
        else throw Error("unknown sampler key: " + k);
      }
    } else if (key == "pruner") {
      for (const auto& [k, v] : value.items()) {
        if (k == "n_warmup_steps") space.study.pruner.n_warmup_steps = v;
        else if (k == "n_min_trials") space.study.pruner.n_min_trials = v;
        else throw Error("unknown pruner key: " + k);
      }
    } else {
      throw Error("unknown search-space key: " + key);
    }
  }
  if (space.params.empty()) throw Error(path + ": search space declares no parameters");
  for (const auto& spec : space.params) {
    spec.validate();
    if (gan_target) {
      gan::GanConfig probe;
      apply_gan_param(probe, spec.name, probe_value(spec));
    } else {
      learners::PresetConfig probe = *base;
      apply_model_param(probe, spec.name, probe_value(spec));
    }
  }
  return space;
}

ordered_json param_value_to_json(const hyperopt::ParamValue& v) {
  return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

}  // namespace

int cmd_tune(const PipelineConfig& cfg, const TuneArgs& args) {
  data::Table t;
  try {
    t = load_input(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIngestion;
  }

  if (args.n_trials < 1) {
    std::cerr << "error: empty study (n_trials must be >= 1)" << '\n';
    return kExitTuning;
  }

  const bool gan_target = args.target == "gan";
  std::string canonical = args.target;
  learners::PresetConfig base;
  SearchSpace space;
  try {
    if (!gan_target) {
      base = learners::preset(args.target);
      if (!canonical.ends_with("-paper")) canonical += "-paper";
    }
    const std::string space_path =
        args.space.empty() ? "spaces/" + (gan_target ? std::string("gan") : canonical) +
                                 ".json"
                           : args.space;
    space = load_space(space_path, gan_target, gan_target ? nullptr : &base);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTuning;
  }

  auto study_config = space.study;
  study_config.seed = cfg.seed;
  hyperopt::Study study(study_config);
  const std::uint64_t trial_seed_base = derive_seed(cfg.seed, kTuneKey);

  std::function<double(hyperopt::TrialHandle&)> objective;
  if (gan_target) {
    // Fidelity objective: train on the minority class, score how closely the
    // synthetic block matches it (negated gap, so the study maximizes).
    const auto minority =
        data::select_rows(t, data::rows_with_label(t, data::minority_label(t)));
    objective = [&, minority](hyperopt::TrialHandle& trial) {
      auto gcfg = cfg.gan_config;
      gcfg.seed = derive_seed(trial_seed_base, static_cast<std::uint64_t>(trial.id()));
      for (const auto& spec : space.params) {
        apply_gan_param(gcfg, spec.name, trial.suggest(spec));
      }
      gcfg.validate();

      const int stride = std::max(1, gcfg.epochs / 10);
      const Index n_eval = minority.row_count();
      bool pruned = false;
      const auto model = gan::train_gan(
          minority, gcfg, [&](int epoch, const gan::GanModel& m) {
            if ((epoch + 1) % stride != 0) return true;
            const auto synth = gan::sample_synthetic(
                m, n_eval, derive_seed(gcfg.seed, 0xC8EC + static_cast<std::uint64_t>(epoch)));
            const double gap = gan::fidelity_report(minority, synth).combined_gap();
            if (trial.report_and_check_prune((epoch + 1) / stride, -gap) ==
                hyperopt::PruneDecision::prune) {
              pruned = true;
              return false;
            }
            return true;
          });
      if (pruned) throw hyperopt::Pruned{};
      const auto synth =
          gan::sample_synthetic(model, n_eval, derive_seed(gcfg.seed, 0xF1DE));
      return -gan::fidelity_report(minority, synth).combined_gap();
    };
  } else {
    // Mean CV weighted-F1 objective; the running mean after each fold feeds
    // the pruner, so hopeless configurations stop early.
    const auto folds = data::stratified_kfold(t, cfg.folds, derive_seed(cfg.seed, kFoldKey));
    const auto policy = sampling_policy(cfg);
    objective = [&, folds, policy](hyperopt::TrialHandle& trial) {
      learners::PresetConfig mcfg = base;
      for (const auto& spec : space.params) {
        apply_model_param(mcfg, spec.name, trial.suggest(spec));
      }
      std::visit([](const auto& c) { c.validate(); }, mcfg);

      double sum = 0.0;
      for (int fold = 0; fold < folds.k; ++fold) {
        const auto training = metrics::apply_sampling(
            data::select_rows(t, folds.training_rows(fold)), policy, fold);
        const auto validation = data::select_rows(t, folds.validation_rows(fold));
        const auto fitted = learners::fit_model(training, mcfg);
        const auto predicted = learners::predict_label(fitted, validation.features);
        sum += metrics::binary_metrics(validation.labels, predicted).weighted_f1;
        if (trial.report_and_check_prune(fold + 1, sum / (fold + 1)) ==
            hyperopt::PruneDecision::prune) {
          throw hyperopt::Pruned{};
        }
      }
      return sum / folds.k;
    };
  }

  hyperopt::run_study(study, objective, args.n_trials, cfg.jobs);
  ensure_out_dir(cfg.out_dir);
  const std::string study_path = out_path(cfg, "study.json");
  write_json_file(study_path, hyperopt::study_to_json(study));
  std::cout << "wrote " << study_path << '\n';

  hyperopt::Trial best;
  try {
    best = study.best_trial();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTuning;
  }

  ordered_json out;
  out["target"] = gan_target ? "gan" : canonical;
  out["direction"] =
      study_config.direction == hyperopt::Direction::maximize ? "maximize" : "minimize";
  out["n_trials"] = args.n_trials;
  ordered_json best_json;
  best_json["id"] = best.id;
  best_json["value"] = *best.final_value;
  ordered_json params;
  for (const auto& [name, value] : best.params) {
    params[name] = param_value_to_json(value);
  }
  best_json["params"] = std::move(params);
  out["best_trial"] = std::move(best_json);
  const std::string best_path = out_path(cfg, "best_params.json");
  write_json_file(best_path, out);
  std::cout << "wrote " << best_path << '\n';
  std::cout << "best trial " << best.id << ": value " << *best.final_value << '\n';
  return kExitOk;
}

}  // namespace imbtab::cli
