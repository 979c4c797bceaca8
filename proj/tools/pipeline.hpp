#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imbtab/data/table.hpp"
#include "imbtab/gan/gan.hpp"
#include "imbtab/hyperopt/hyperopt.hpp"
#include "imbtab/learners/presets.hpp"
#include "imbtab/metrics/cross_validate.hpp"
#include "imbtab/metrics/metrics.hpp"
#include "imbtab/smote/smote.hpp"
#include "json.hpp"

namespace imbtab::cli {

// Exit codes, one per pipeline stage that can fail.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitIngestion = 2;
inline constexpr int kExitSampling = 3;
inline constexpr int kExitTuning = 4;
inline constexpr int kExitBenchCell = 5;

// Purpose tags mixed into the pipeline seed so every stage draws from its own
// deterministic stream. Stable across releases: changing one changes outputs.
inline constexpr std::uint64_t kFoldKey = 0xF01D;     // CV fold assignment
inline constexpr std::uint64_t kTuneKey = 0x7E57;     // per-trial sampler seeds
inline constexpr std::uint64_t kHoldoutKey = 0x408D;  // bench holdout split
inline constexpr std::uint64_t kWeightKey = 0x3E16;   // holdout-mode weight split

/// Everything a run needs, assembled from defaults, then an optional JSON
/// config file, then command-line overrides — later layers win. The schema is
/// documented in the README and mirrored by config_from_json.
struct PipelineConfig {
  std::string input;
  std::string label_column = "Label";
  double correlation_threshold = 0.95;
  std::string policy = "none";  // none | smote | gan
  smote::SmoteConfig smote_config;
  gan::GanConfig gan_config;
  int folds = 10;
  std::vector<std::string> models;  // preset names or best-params files
  std::string ensemble_mode = "soft";
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool paper_mode = false;
  int jobs = 1;
  std::optional<double> holdout;  // bench: evaluate on a holdout split instead of CV

  /// Throws Error on structural problems (unknown policy, folds < 2, ...).
  void validate() const;

  /// Locks every protocol knob to the published reference values; input,
  /// label column, seed, jobs, and out_dir stay caller-controlled.
  void apply_paper_mode();
};

/// Layered assembly: defaults -> config file (optional) -> flag overrides.
PipelineConfig config_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);

/// Loads and validates the input CSV. Throws the data module's errors.
data::Table load_input(const PipelineConfig& cfg);

/// The configured policy as the CV harness consumes it; sampler seeds are the
/// pipeline seed (per-fold derivation happens inside apply_sampling).
metrics::SamplingPolicy sampling_policy(const PipelineConfig& cfg);
metrics::SamplingPolicy sampling_policy(const PipelineConfig& cfg,
                                        const std::string& policy_name);

void ensure_out_dir(const std::string& dir);
std::string out_path(const PipelineConfig& cfg, const std::string& file);

/// Writes the document with a trailing newline; 2-space indent, keys in
/// insertion order, so equal documents produce identical bytes.
void write_json_file(const std::string& path, const nlohmann::ordered_json& doc);
nlohmann::ordered_json read_json_file(const std::string& path);

nlohmann::ordered_json report_to_json(const metrics::MetricsReport& r);

/// Applies one named hyperparameter to a model configuration; throws Error
/// for names the target does not expose (this is also how search spaces are
/// validated up front). `value` is a typed draw from the study.
void apply_model_param(learners::PresetConfig& cfg, const std::string& name,
                       const hyperopt::ParamValue& value);
void apply_gan_param(gan::GanConfig& cfg, const std::string& name,
                     const hyperopt::ParamValue& value);

/// A bench/tune model entry: either a canonical preset name or a path to a
/// best-params file written by the tune command (detected by .json suffix).
struct ResolvedModel {
  std::string spec;    // as given
  std::string name;    // canonical preset name
  std::string label;   // report row label
  learners::PresetConfig config;
};

ResolvedModel resolve_model_spec(const std::string& spec);

}  // namespace imbtab::cli
