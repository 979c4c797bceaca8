#pragma once

#include <functional>
#include <vector>

#include "imbtab/data/split.hpp"
#include "imbtab/data/table.hpp"
#include "imbtab/gan/gan.hpp"
#include "imbtab/learners/presets.hpp"
#include "imbtab/metrics/metrics.hpp"
#include "imbtab/smote/smote.hpp"

namespace imbtab::metrics {

/// How each fold's training portion is rebalanced before fitting. Validation
/// rows are never touched: synthetic data exists only inside training folds.
struct SamplingPolicy {
  enum class Kind { none, smote, gan };
  Kind kind = Kind::none;
  smote::SmoteConfig smote_config;
  gan::GanConfig gan_config;

  static SamplingPolicy none() { return {}; }
  static SamplingPolicy with_smote(smote::SmoteConfig cfg) {
    SamplingPolicy p;
    p.kind = Kind::smote;
    p.smote_config = cfg;
    return p;
  }
  static SamplingPolicy with_gan(gan::GanConfig cfg) {
    SamplingPolicy p;
    p.kind = Kind::gan;
    p.gan_config = cfg;
    return p;
  }
};

/// The rebalancing step applied to one fold's training rows: the policy's
/// sampler runs with a fold-derived seed, so synthetic rows differ across
/// folds while the whole run stays a function of the policy seed. Exposed so
/// callers that need per-fold control (tuning, benchmarks) produce exactly
/// the training tables cross_validate would.
data::Table apply_sampling(const data::Table& training, const SamplingPolicy& policy,
                           int fold);

struct CvResult {
  std::vector<MetricsReport> fold_reports;  // fold-index order
  MetricsReport mean;                       // unweighted over folds
};

/// Test hook: sees each fold's post-policy training table and untouched
/// validation table. May fire from worker threads (serialized internally)
/// and in any fold order when jobs > 1.
using FoldObserver = std::function<void(int fold, const data::Table& training,
                                        const data::Table& validation)>;

/// Per-fold train/evaluate loop: the sampling policy is applied to the
/// training portion only (with a per-fold derived sampler seed), the model is
/// fit on the result, and metrics come from the untouched real validation
/// rows. jobs > 1 evaluates folds concurrently; results and errors are
/// reported in fold-index order either way. Learner errors propagate tagged
/// with their fold index.
CvResult cross_validate(const data::Table& t, const data::FoldAssignment& folds,
                        const learners::PresetConfig& model,
                        const SamplingPolicy& policy, int jobs = 1,
                        const FoldObserver& observer = {});

}  // namespace imbtab::metrics
