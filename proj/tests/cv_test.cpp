#include <cstring>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "imbtab/core/error.hpp"
#include "imbtab/data/split.hpp"
#include "imbtab/metrics/cross_validate.hpp"
#include "test_util.hpp"

using namespace imbtab;
using namespace imbtab::metrics;
using imbtab::test::random_table;

namespace {

/// Byte-exact row fingerprint (features + label) for membership scans.
std::string row_key(const data::Table& t, Index row) {
  std::string key(static_cast<std::size_t>(t.col_count()) * sizeof(double) + sizeof(int),
                  '\0');
  for (Index c = 0; c < t.col_count(); ++c) {
    const double v = t.features(row, c);
    std::memcpy(key.data() + static_cast<std::size_t>(c) * sizeof(double), &v,
                sizeof(double));
  }
  const int label = t.labels[row];
  std::memcpy(key.data() + key.size() - sizeof(int), &label, sizeof(int));
  return key;
}

std::unordered_set<std::string> row_set(const data::Table& t) {
  std::unordered_set<std::string> keys;
  for (Index r = 0; r < t.row_count(); ++r) keys.insert(row_key(t, r));
  return keys;
}

learners::PresetConfig tiny_gbdt(int rounds = 3) {
  learners::GbdtConfig cfg;
  cfg.n_estimators = rounds;
  cfg.max_depth = 2;
  return cfg;
}

bool reports_equal(const MetricsReport& a, const MetricsReport& b) {
  return a.accuracy == b.accuracy && a.precision == b.precision &&
         a.recall == b.recall && a.f1 == b.f1 && a.weighted_f1 == b.weighted_f1 &&
         a.rmse == b.rmse && a.undefined == b.undefined;
}

}  // namespace

TEST_CASE("ten folds on 6000 rows yield ten reports over 600 rows each") {
  const auto t = random_table(3000, 3000, 3, 61);
  const auto folds = data::stratified_kfold(t, 10, 1);
  std::vector<Index> validation_sizes;
  const auto result = cross_validate(
      t, folds, tiny_gbdt(2), SamplingPolicy::none(), 1,
      [&](int, const data::Table&, const data::Table& validation) {
        validation_sizes.push_back(validation.row_count());
      });
  CHECK(result.fold_reports.size() == 10);
  REQUIRE(validation_sizes.size() == 10);
  for (const Index n : validation_sizes) CHECK(n == 600);
}

TEST_CASE("cross-validation is deterministic and thread-count invariant") {
  const auto t = random_table(200, 120, 4, 67);
  const auto folds = data::stratified_kfold(t, 5, 9);
  smote::SmoteConfig smote_cfg;
  smote_cfg.seed = 4;
  const auto policy = SamplingPolicy::with_smote(smote_cfg);

  const auto first = cross_validate(t, folds, tiny_gbdt(), policy, 1);
  const auto second = cross_validate(t, folds, tiny_gbdt(), policy, 1);
  const auto threaded = cross_validate(t, folds, tiny_gbdt(), policy, 4);

  REQUIRE(first.fold_reports.size() == 5);
  for (std::size_t f = 0; f < 5; ++f) {
    CHECK(reports_equal(first.fold_reports[f], second.fold_reports[f]));
    CHECK(reports_equal(first.fold_reports[f], threaded.fold_reports[f]));
  }
  CHECK(reports_equal(first.mean, threaded.mean));
}

TEST_CASE("synthetic rows never reach a validation set") {
  const auto t = random_table(300, 60, 4, 71);
  const auto original = row_set(t);
  const auto folds = data::stratified_kfold(t, 5, 3);

  smote::SmoteConfig smote_cfg;
  smote_cfg.seed = 11;
  int observed = 0;
  cross_validate(t, folds, tiny_gbdt(), SamplingPolicy::with_smote(smote_cfg), 1,
                 [&](int fold, const data::Table& training, const data::Table& validation) {
                   ++observed;
                   // Training portion was rebalanced: classes match and the
                   // extra rows are genuinely synthetic (not copies of t).
                   const auto counts = data::class_counts(training);
                   CHECK(counts[0] == counts[1]);
                   Index synthetic = 0;
                   for (Index r = 0; r < training.row_count(); ++r) {
                     synthetic += original.count(row_key(training, r)) == 0 ? 1 : 0;
                   }
                   CHECK(synthetic == counts[0] - 48);  // 60 minority, 12 held out
                   // Every validation row is a verbatim original row, and the
                   // validation rows are exactly this fold's assignment.
                   const auto expected = folds.validation_rows(fold);
                   REQUIRE(validation.row_count() ==
                           static_cast<Index>(expected.size()));
                   for (Index r = 0; r < validation.row_count(); ++r) {
                     CHECK(original.count(row_key(validation, r)) == 1);
                     CHECK(row_key(validation, r) == row_key(t, expected[static_cast<std::size_t>(r)]));
                   }
                 });
  CHECK(observed == 5);
}

TEST_CASE("gan policy balances training folds with synthetic minority rows") {
  const auto t = random_table(40, 12, 3, 73);
  const auto original = row_set(t);
  const auto folds = data::stratified_kfold(t, 4, 5);

  gan::GanConfig gan_cfg;
  gan_cfg.epochs = 2;
  gan_cfg.generator_dims = {8};
  gan_cfg.discriminator_dims = {8};
  gan_cfg.embedding_dim = 4;
  gan_cfg.batch_size = 4;
  gan_cfg.seed = 21;

  cross_validate(t, folds, tiny_gbdt(2), SamplingPolicy::with_gan(gan_cfg), 1,
                 [&](int, const data::Table& training, const data::Table& validation) {
                   const auto counts = data::class_counts(training);
                   CHECK(counts[0] == counts[1]);
                   for (Index r = 0; r < validation.row_count(); ++r) {
                     CHECK(original.count(row_key(validation, r)) == 1);
                   }
                 });
}

TEST_CASE("learner failures carry their fold index") {
  const auto t = random_table(60, 40, 3, 79);
  const auto folds = data::stratified_kfold(t, 4, 7);
  learners::GbdtConfig bad;
  bad.learning_rate = 0.0;
  try {
    cross_validate(t, folds, learners::PresetConfig{bad}, SamplingPolicy::none());
    FAIL("expected a propagated config error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("fold 0") == 0);
    CHECK(std::string(e.what()).find("learning_rate") != std::string::npos);
  }
}

TEST_CASE("fold assignments must cover the table") {
  const auto t = random_table(30, 30, 2, 83);
  auto folds = data::stratified_kfold(t, 3, 1);
  folds.fold_of_row.pop_back();
  CHECK_THROWS_AS(
      cross_validate(t, folds, tiny_gbdt(), SamplingPolicy::none()), Error);
}
