#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "imbtab/core/error.hpp"
#include "pipeline.hpp"

namespace {

using namespace imbtab;
using namespace imbtab::cli;

/// Flag storage shared by all subcommands; only the parsed subcommand's
/// options are consulted, and only flags that were actually given override
/// the config file.
struct FlagValues {
  std::string config_path;
  std::string input;
  std::string label_column;
  double threshold = 0.95;
  std::string policy;
  int folds = 10;
  std::vector<std::string> models;
  std::string ensemble_mode;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool paper_mode = false;
  int jobs = 1;
  double holdout = 0.0;
};

struct CommonOpts {
  CLI::Option* config = nullptr;
  CLI::Option* input = nullptr;
  CLI::Option* label = nullptr;
  CLI::Option* threshold = nullptr;
  CLI::Option* policy = nullptr;
  CLI::Option* folds = nullptr;
  CLI::Option* models = nullptr;
  CLI::Option* ensemble = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* out_dir = nullptr;
  CLI::Option* paper = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* holdout = nullptr;
};

CommonOpts add_common(CLI::App* cmd, FlagValues& v) {
  CommonOpts o;
  o.config = cmd->add_option("--config", v.config_path,
                             "pipeline config file (JSON; flags override it)");
  o.input = cmd->add_option("--input", v.input, "input CSV file");
  o.label = cmd->add_option("--label-column", v.label_column,
                            "label column name (default Label)");
  o.threshold = cmd->add_option("--threshold", v.threshold,
                                "correlation pruning threshold (default 0.95)");
  o.policy = cmd->add_option("--policy", v.policy, "sampling policy: none|smote|gan");
  o.folds = cmd->add_option("--folds", v.folds, "cross-validation folds (default 10)");
  o.models = cmd->add_option("--model", v.models,
                             "model preset name or best-params file (repeatable)");
  o.ensemble = cmd->add_option("--ensemble-mode", v.ensemble_mode,
                               "ensemble voting: soft|hard (default soft)");
  o.seed = cmd->add_option("--seed", v.seed, "pipeline seed (default 0)");
  o.out_dir = cmd->add_option("--out-dir", v.out_dir, "output directory (default out)");
  o.paper = cmd->add_flag("--paper-mode", v.paper_mode,
                          "lock every protocol knob to the published reference values");
  o.jobs = cmd->add_option("--jobs", v.jobs, "worker threads (default 1; 1 = "
                                             "byte-reproducible artifacts)");
  o.holdout = cmd->add_option("--holdout", v.holdout,
                              "bench: evaluate on this holdout fraction instead of CV");
  return o;
}

PipelineConfig build_config(const FlagValues& v, const CommonOpts& o) {
  PipelineConfig cfg;
  if (o.config->count()) cfg = config_from_json(read_json_file(v.config_path));
  if (o.input->count()) cfg.input = v.input;
  if (o.label->count()) cfg.label_column = v.label_column;
  if (o.threshold->count()) cfg.correlation_threshold = v.threshold;
  if (o.policy->count()) cfg.policy = v.policy;
  if (o.folds->count()) cfg.folds = v.folds;
  if (o.models->count()) cfg.models = v.models;
  if (o.ensemble->count()) cfg.ensemble_mode = v.ensemble_mode;
  if (o.seed->count()) cfg.seed = v.seed;
  if (o.out_dir->count()) cfg.out_dir = v.out_dir;
  if (o.paper->count()) cfg.paper_mode = v.paper_mode;
  if (o.jobs->count()) cfg.jobs = v.jobs;
  if (o.holdout->count()) cfg.holdout = v.holdout;
  if (cfg.models.empty()) cfg.models = learners::preset_names();
  if (cfg.paper_mode) cfg.apply_paper_mode();
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class-imbalanced tabular classification toolkit"};
  app.require_subcommand(1);

  FlagValues flags;
  TuneArgs tune_args;

  auto* inspect = app.add_subcommand("inspect", "summarize a dataset");
  const auto inspect_opts = add_common(inspect, flags);
  auto* balance = app.add_subcommand("balance", "write a class-balanced copy");
  const auto balance_opts = add_common(balance, flags);
  auto* tune = app.add_subcommand("tune", "hyperparameter search for a target");
  const auto tune_opts = add_common(tune, flags);
  tune->add_option("--target", tune_args.target,
                   "gan, or a model preset name (xgb-paper, lgbm-paper, ...)")
      ->required();
  tune->add_option("--trials", tune_args.n_trials, "number of trials (default 50)");
  tune->add_option("--space", tune_args.space,
                   "search-space file (default spaces/<target>.json)");
  auto* bench = app.add_subcommand("bench", "three-way sampling benchmark");
  const auto bench_opts = add_common(bench, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUnexpected;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(build_config(flags, inspect_opts));
    if (balance->parsed()) return cmd_balance(build_config(flags, balance_opts));
    if (tune->parsed()) return cmd_tune(build_config(flags, tune_opts), tune_args);
    if (bench->parsed()) return cmd_bench(build_config(flags, bench_opts));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnexpected;
  }
  return kExitUnexpected;  // unreachable: a subcommand is required
}
