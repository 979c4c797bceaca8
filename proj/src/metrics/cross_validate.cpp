#include "imbtab/metrics/cross_validate.hpp"

#include <atomic>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"

namespace imbtab::metrics {

data::Table apply_sampling(const data::Table& training, const SamplingPolicy& policy,
                           int fold) {
  // Per-fold derived sampler seeds keep synthetic rows independent across
  // folds while the whole run stays a function of the policy seed.
  switch (policy.kind) {
    case SamplingPolicy::Kind::smote: {
      auto cfg = policy.smote_config;
      cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(fold));
      return smote::smote_balance(training, cfg);
    }
    case SamplingPolicy::Kind::gan: {
      auto cfg = policy.gan_config;
      cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(fold));
      return gan::gan_balance(training, cfg);
    }
    case SamplingPolicy::Kind::none:
      break;
  }
  return training;
}

CvResult cross_validate(const data::Table& t, const data::FoldAssignment& folds,
                        const learners::PresetConfig& model,
                        const SamplingPolicy& policy, int jobs,
                        const FoldObserver& observer) {
  if (folds.k < 2 ||
      folds.fold_of_row.size() != static_cast<std::size_t>(t.row_count())) {
    throw Error("fold assignment does not cover the table");
  }

  CvResult result;
  result.fold_reports.resize(static_cast<std::size_t>(folds.k));
  std::vector<std::optional<std::string>> failures(static_cast<std::size_t>(folds.k));
  std::mutex observer_mutex;

  const auto run_fold = [&](int fold) {
    try {
      const auto training_table =
          apply_sampling(data::select_rows(t, folds.training_rows(fold)), policy, fold);
      const auto validation = data::select_rows(t, folds.validation_rows(fold));
      if (observer) {
        const std::lock_guard<std::mutex> lock(observer_mutex);
        observer(fold, training_table, validation);
      }
      const auto fitted = learners::fit_model(training_table, model);
      const IntVector predicted = learners::predict_label(fitted, validation.features);
      result.fold_reports[static_cast<std::size_t>(fold)] =
          binary_metrics(validation.labels, predicted);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(fold)] =
          "fold " + std::to_string(fold) + ": " + e.what();
    }
  };

  if (jobs <= 1) {
    for (int fold = 0; fold < folds.k; ++fold) run_fold(fold);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int count = std::min(jobs, folds.k);
    workers.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (int fold = next.fetch_add(1); fold < folds.k; fold = next.fetch_add(1)) {
          run_fold(fold);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  for (const auto& failure : failures) {  // lowest failing fold wins
    if (failure) throw Error(*failure);
  }
  result.mean = mean_report(result.fold_reports);
  return result;
}

}  // namespace imbtab::metrics
