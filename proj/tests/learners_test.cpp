#include <cmath>
#include <vector>

#include "doctest.h"
#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"
#include "imbtab/learners/gbdt.hpp"
#include "imbtab/learners/model_json.hpp"
#include "imbtab/learners/presets.hpp"
#include "split_oracle.hpp"
#include "test_util.hpp"

using namespace imbtab;
using namespace imbtab::learners;
using imbtab::test::brute_force_split;
using imbtab::test::make_table;
using imbtab::test::random_table;

namespace {

Tree root_tree(const Matrix& x, const Vector& g, const Vector& h,
               const GbdtConfig& cfg) {
  std::vector<Index> rows, cols;
  for (Index r = 0; r < x.rows(); ++r) rows.push_back(r);
  for (Index c = 0; c < x.cols(); ++c) cols.push_back(c);
  return fit_boosting_tree(x, g, h, cfg, rows, cols);
}

double train_accuracy(const TrainedModel& m, const data::Table& t) {
  const IntVector predicted = predict_label(m, t.features);
  double hits = 0.0;
  for (Index i = 0; i < t.row_count(); ++i) hits += predicted[i] == t.labels[i];
  return hits / static_cast<double>(t.row_count());
}

}  // namespace

TEST_CASE("single-row tree yields the closed-form leaf value") {
  Matrix x(1, 1);
  x << 0.0;
  Vector g(1), h(1);
  g << 4.0;
  h << 2.0;

  GbdtConfig plain;  // lambda = 0, alpha = 0: w = -G/H = -2
  CHECK(root_tree(x, g, h, plain).nodes[0].value == doctest::Approx(-2.0));

  GbdtConfig regularized;  // soft-threshold 4 -> 3, w = -3/(2+1) = -1
  regularized.l1_alpha = 1.0;
  regularized.l2_lambda = 1.0;
  CHECK(root_tree(x, g, h, regularized).nodes[0].value == doctest::Approx(-1.0));
}

TEST_CASE("six-point split matches the exhaustive gain maximizer") {
  Matrix x(6, 1);
  x << 0.0, 1.0, 2.0, 3.0, 4.0, 5.0;
  Vector g(6), h(6);
  g << -2.0, -1.5, 0.5, 1.0, 2.0, 2.5;
  h << 1.0, 1.0, 1.0, 1.0, 1.0, 1.0;

  GbdtConfig cfg;
  cfg.max_depth = 1;
  const Tree tree = root_tree(x, g, h, cfg);
  const auto oracle = brute_force_split(x, g, h, cfg);
  REQUIRE(oracle.found());
  CHECK(tree.nodes[0].feature == oracle.feature);
  CHECK(tree.nodes[0].threshold == oracle.threshold);
  CHECK(tree.nodes[0].gain == doctest::Approx(oracle.gain));
}

TEST_CASE("root splits match the brute-force oracle on random datasets") {
  Rng rng(42);
  for (int round = 0; round < 12; ++round) {
    const Index n = 20 + static_cast<Index>(rng.uniform_int(181));
    const Index d = 1 + static_cast<Index>(rng.uniform_int(8));
    Matrix x(n, d);
    Vector g(n), h(n);
    const bool coarse = round % 2 == 0;  // heavy duplicate values half the time
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < d; ++c) {
        x(r, c) = coarse ? std::floor(rng.uniform() * 5.0) : rng.normal();
      }
      g[r] = rng.normal();
      h[r] = 0.1 + 0.9 * rng.uniform();
    }
    GbdtConfig cfg;
    cfg.max_depth = 1;
    cfg.l1_alpha = round % 3 == 0 ? 0.5 : 0.0;
    cfg.l2_lambda = round % 4 == 0 ? 1.0 : 1e-3;
    cfg.min_child_weight = round % 5 == 0 ? 2.0 : 0.0;

    const Tree tree = root_tree(x, g, h, cfg);
    const auto oracle = brute_force_split(x, g, h, cfg);
    REQUIRE(oracle.found() == !tree.nodes[0].is_leaf());
    if (oracle.found()) {
      CHECK(tree.nodes[0].feature == oracle.feature);
      CHECK(tree.nodes[0].threshold == oracle.threshold);
      CHECK(tree.nodes[0].gain == doctest::Approx(oracle.gain).epsilon(1e-9));
    }
  }
}

TEST_CASE("equal-gain ties keep the lowest feature index") {
  // Features 0 and 1 induce the same partition up to relabeling, so their
  // best gains are identical; the tie must go to feature 0.
  Matrix x(4, 2);
  x << 0, 1, 0, 1, 1, 0, 1, 0;
  Vector g(4), h(4);
  g << 1, 1, -1, -1;
  h << 1, 1, 1, 1;
  GbdtConfig cfg;
  cfg.max_depth = 1;
  const Tree tree = root_tree(x, g, h, cfg);
  CHECK(tree.nodes[0].feature == 0);
}

TEST_CASE("equal-gain ties keep the lowest threshold") {
  // Thresholds 0.5 and 2.5 score the same by symmetry; 0.5 must win.
  Matrix x(4, 1);
  x << 0, 1, 2, 3;
  Vector g(4), h(4);
  g << -1, 1, 1, -1;
  h << 1, 1, 1, 1;
  GbdtConfig cfg;
  cfg.max_depth = 1;
  const Tree tree = root_tree(x, g, h, cfg);
  CHECK(tree.nodes[0].threshold == doctest::Approx(0.5));
}

TEST_CASE("min_child_weight rejects unbalanced splits") {
  // Unconstrained, the isolated g=3 row at x=0 gives the best split; with a
  // hessian floor of 2 only the middle threshold survives.
  Matrix x(4, 1);
  x << 0, 1, 2, 3;
  Vector g(4), h(4);
  g << 3, -1, -1, -1;
  h << 1, 1, 1, 1;
  GbdtConfig cfg;
  cfg.max_depth = 1;
  CHECK(root_tree(x, g, h, cfg).nodes[0].threshold == doctest::Approx(0.5));
  cfg.min_child_weight = 2.0;
  CHECK(root_tree(x, g, h, cfg).nodes[0].threshold == doctest::Approx(1.5));
}

TEST_CASE("constant features produce a single leaf") {
  Matrix x = Matrix::Ones(5, 2);
  Vector g = Vector::Ones(5), h = Vector::Ones(5);
  const Tree tree = root_tree(x, g, h, GbdtConfig{});
  CHECK(tree.nodes.size() == 1);
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.nodes[0].value == doctest::Approx(-1.0));
}

TEST_CASE("leaf-wise growth respects the num_leaves cap") {
  const auto t = random_table(40, 40, 4, 9);
  Vector g(t.row_count()), h(t.row_count());
  for (Index i = 0; i < t.row_count(); ++i) {
    g[i] = (t.labels[i] ? -0.5 : 0.5) + 0.01 * t.features(i, 0);
    h[i] = 0.25;
  }
  GbdtConfig cfg;
  cfg.growth = Growth::leafwise;
  cfg.max_depth = 10;
  cfg.num_leaves = 4;
  const Tree tree = root_tree(t.features, g, h, cfg);
  CHECK(tree.leaf_count() == 4);

  cfg.growth = Growth::depthwise;
  cfg.num_leaves.reset();
  cfg.max_depth = 1;
  CHECK(root_tree(t.features, g, h, cfg).leaf_count() <= 2);
}

TEST_CASE("boosting reaches perfect accuracy on separable data") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 1; i <= 5; ++i) {
    rows.push_back({static_cast<double>(-i)});
    labels.push_back(0);
    rows.push_back({static_cast<double>(i)});
    labels.push_back(1);
  }
  const auto t = make_table(rows, labels);

  GbdtConfig cfg;
  cfg.max_depth = 1;
  cfg.n_estimators = 10;
  const auto model = fit_gbdt(t, cfg);
  CHECK(train_accuracy(model, t) == doctest::Approx(1.0));

  cfg.order = BoostOrder::first;  // residual fitting gets there as well
  CHECK(train_accuracy(fit_gbdt(t, cfg), t) == doctest::Approx(1.0));
}

TEST_CASE("depth-2 boosting solves replicated XOR") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int copy = 0; copy < 25; ++copy) {
    for (const auto& [a, b, y] : {std::tuple{0, 0, 0}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}}) {
      rows.push_back({static_cast<double>(a), static_cast<double>(b)});
      labels.push_back(y);
    }
  }
  const auto t = make_table(rows, labels);

  GbdtConfig cfg;
  cfg.max_depth = 2;
  cfg.n_estimators = 50;
  CHECK(train_accuracy(fit_gbdt(t, cfg), t) == doctest::Approx(1.0));
}

TEST_CASE("single-class input is rejected") {
  const auto t = random_table(10, 0, 3, 4);
  CHECK_THROWS_AS(fit_gbdt(t, GbdtConfig{}), SingleClassInputError);
  CHECK_THROWS_AS(fit_extra_trees(t, EtcConfig{}), SingleClassInputError);
}

TEST_CASE("training logloss is non-increasing without subsampling") {
  const auto t = random_table(60, 40, 5, 11);
  GbdtConfig cfg;
  cfg.n_estimators = 30;
  cfg.max_depth = 3;
  const auto model = fit_gbdt(t, cfg);
  REQUIRE(model.train_loss.size() == 30);
  for (std::size_t i = 1; i < model.train_loss.size(); ++i) {
    CHECK(model.train_loss[i] <= model.train_loss[i - 1] + 1e-12);
  }
}

TEST_CASE("early stopping keeps the best validation round") {
  // Pure-noise labels overfit immediately, so validation loss turns upward
  // and the run stops long before the round budget.
  const auto t = random_table(120, 80, 4, 13);
  GbdtConfig cfg;
  cfg.n_estimators = 400;
  cfg.max_depth = 6;
  cfg.learning_rate = 0.5;
  cfg.early_stopping_rounds = 5;
  cfg.validation_fraction = 0.2;
  const auto model = fit_gbdt(t, cfg);

  CHECK(model.trees.size() < 400);
  CHECK(model.validation_loss.size() == model.trees.size());
  REQUIRE(model.best_iteration >= 1);
  REQUIRE(static_cast<std::size_t>(model.best_iteration) <= model.trees.size());
  const double best = model.validation_loss[static_cast<std::size_t>(model.best_iteration) - 1];
  for (std::size_t j = static_cast<std::size_t>(model.best_iteration);
       j < model.validation_loss.size(); ++j) {
    CHECK(best <= model.validation_loss[j]);
  }
}

TEST_CASE("zero-tree boosting model predicts the prior sigmoid") {
  TrainedModel m;
  m.kind = ModelKind::gbdt;
  m.base_score = 0.0;
  m.best_iteration = 0;
  m.n_features = 2;
  const Matrix rows = Matrix::Random(3, 2);
  const Matrix proba = predict_proba(m, rows);
  for (Index i = 0; i < 3; ++i) {
    CHECK(proba(i, 0) == doctest::Approx(0.5));
    CHECK(proba(i, 1) == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(predict_proba(m, Matrix::Random(3, 5)), ShapeMismatchError);
}

TEST_CASE("predicted margins equal independent per-tree re-summation") {
  const auto t = random_table(70, 50, 4, 17);
  GbdtConfig cfg;
  cfg.n_estimators = 20;
  cfg.max_depth = 3;
  cfg.subsample = 0.8;
  cfg.colsample = 0.75;
  const auto model = fit_gbdt(t, cfg);
  const Matrix proba = predict_proba(model, t.features);

  Rng rng(3);
  for (int pick = 0; pick < 5; ++pick) {
    const Index row = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(t.row_count())));
    double margin = model.base_score;
    for (int tr = 0; tr < model.best_iteration; ++tr) {
      const auto& nodes = model.trees[static_cast<std::size_t>(tr)].nodes;
      std::size_t at = 0;
      while (!nodes[at].is_leaf()) {
        at = static_cast<std::size_t>(t.features(row, nodes[at].feature) < nodes[at].threshold
                                          ? nodes[at].left
                                          : nodes[at].right);
      }
      margin += cfg.learning_rate * nodes[at].value;
    }
    const double expected = 1.0 / (1.0 + std::exp(-margin));
    CHECK(std::abs(proba(row, 1) - expected) <= 1e-12);
  }
}

TEST_CASE("probabilities stay finite and normalized on extreme inputs") {
  const auto t = random_table(30, 30, 3, 19);
  GbdtConfig cfg;
  cfg.n_estimators = 10;
  const auto model = fit_gbdt(t, cfg);
  Matrix wild(3, 3);
  wild << 1e300, -1e300, 0.0, -1e-300, 1e300, -1e300, 0.0, 0.0, 1e300;
  const Matrix proba = predict_proba(model, wild);
  for (Index i = 0; i < proba.rows(); ++i) {
    CHECK(std::isfinite(proba(i, 0)));
    CHECK(proba(i, 0) >= 0.0);
    CHECK(proba(i, 1) <= 1.0);
    CHECK(proba(i, 0) + proba(i, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("extra trees reach perfect accuracy on separable data") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 1; i <= 8; ++i) {
    rows.push_back({static_cast<double>(-i), 1.0});
    labels.push_back(0);
    rows.push_back({static_cast<double>(i), 1.0});
    labels.push_back(1);
  }
  const auto t = make_table(rows, labels);
  EtcConfig cfg;
  cfg.n_estimators = 30;
  cfg.seed = 5;
  CHECK(train_accuracy(fit_extra_trees(t, cfg), t) == doctest::Approx(1.0));
}

TEST_CASE("extra trees on constant features predict the class prior") {
  std::vector<std::vector<double>> rows(10, {3.0, 7.0});
  std::vector<int> labels{0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
  const auto t = make_table(rows, labels);
  EtcConfig cfg;
  cfg.n_estimators = 12;
  const auto model = fit_extra_trees(t, cfg);
  for (const Tree& tree : model.trees) CHECK(tree.nodes.size() == 1);
  const Matrix proba = predict_proba(model, t.features);
  for (Index i = 0; i < t.row_count(); ++i) {
    CHECK(proba(i, 1) == doctest::Approx(0.4));
  }
  CHECK(feature_importance(model).isZero());
}

TEST_CASE("reference forest config is echoed in the model snapshot") {
  const auto t = random_table(15, 15, 3, 23);
  EtcConfig cfg;
  cfg.n_estimators = 950;
  cfg.min_samples_split = 2;
  cfg.seed = 1;
  const auto model = fit_extra_trees(t, cfg, 4);
  CHECK(model.kind == ModelKind::extra_trees);
  CHECK(model.etc_config.n_estimators == 950);
  CHECK(model.etc_config.min_samples_split == 2);
  CHECK(model.trees.size() == 950);
}

TEST_CASE("forest training is deterministic for any thread count") {
  const auto t = random_table(50, 30, 5, 29);
  EtcConfig cfg;
  cfg.n_estimators = 24;
  cfg.seed = 8;
  const auto solo = fit_extra_trees(t, cfg, 1);
  const auto pooled = fit_extra_trees(t, cfg, 4);
  CHECK(model_to_json(solo).dump() == model_to_json(pooled).dump());
}

TEST_CASE("importance concentrates on the only informative feature") {
  // Features 0-2 are constant, feature 3 equals the label: every split must
  // land on index 3 and its share is exactly 1.
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    const int y = i % 2;
    rows.push_back({1.0, 2.0, 3.0, static_cast<double>(y)});
    labels.push_back(y);
  }
  const auto t = make_table(rows, labels);
  GbdtConfig cfg;
  cfg.n_estimators = 5;
  const Vector importance = feature_importance(fit_gbdt(t, cfg));
  CHECK(importance[3] == doctest::Approx(1.0));
  CHECK(importance.sum() == doctest::Approx(1.0));
  CHECK(importance[0] == 0.0);
}

TEST_CASE("importance ranks the label-determining feature first") {
  Rng rng(31);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 80; ++i) {
    const double signal = rng.normal();
    rows.push_back({signal, rng.normal()});
    labels.push_back(signal > 0.0 ? 1 : 0);
  }
  const auto t = make_table(rows, labels);

  GbdtConfig boost_cfg;
  boost_cfg.n_estimators = 10;
  boost_cfg.max_depth = 3;
  const Vector boosted = feature_importance(fit_gbdt(t, boost_cfg));
  CHECK(boosted[0] > boosted[1]);
  CHECK(boosted.sum() == doctest::Approx(1.0));

  EtcConfig forest_cfg;
  forest_cfg.n_estimators = 40;
  forest_cfg.max_features = 1.0;
  const Vector forest = feature_importance(fit_extra_trees(t, forest_cfg));
  CHECK(forest[0] > forest[1]);
  CHECK(forest.sum() == doctest::Approx(1.0));
}

TEST_CASE("config validation rejects out-of-range fields") {
  GbdtConfig cfg;
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GbdtConfig{};
  cfg.subsample = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GbdtConfig{};
  cfg.n_estimators = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GbdtConfig{};
  cfg.num_leaves = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GbdtConfig{};
  cfg.validation_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);

  EtcConfig etc;
  etc.max_features = 0.0;
  CHECK_THROWS_AS(etc.validate(), Error);
  etc = EtcConfig{};
  etc.min_samples_split = 1;
  CHECK_THROWS_AS(etc.validate(), Error);
}

TEST_CASE("presets carry the reference configurations verbatim") {
  const auto xgb = std::get<GbdtConfig>(preset("xgb-paper"));
  CHECK(xgb.order == BoostOrder::second);
  CHECK(xgb.growth == Growth::depthwise);
  CHECK(xgb.learning_rate == doctest::Approx(0.04));
  CHECK(xgb.n_estimators == 1125);
  CHECK(xgb.max_depth == 22);
  CHECK(xgb.min_child_weight == doctest::Approx(2.057));
  CHECK(xgb.subsample == doctest::Approx(0.598));
  CHECK(xgb.colsample == doctest::Approx(0.462));
  CHECK(xgb.l1_alpha == doctest::Approx(3.627));
  CHECK(xgb.l2_lambda == doctest::Approx(0.0015));
  CHECK(xgb.seed == 101);
  CHECK(xgb.early_stopping_rounds == 50);
  CHECK(xgb.validation_fraction == doctest::Approx(0.1));

  const auto lgbm = std::get<GbdtConfig>(preset("lgbm"));
  CHECK(lgbm.growth == Growth::leafwise);
  CHECK(lgbm.learning_rate == doctest::Approx(0.136));
  CHECK(lgbm.n_estimators == 10049);
  CHECK(lgbm.max_depth == 20);
  CHECK(lgbm.num_leaves == 232);
  CHECK(lgbm.min_samples_split == 50);
  CHECK(lgbm.subsample == doctest::Approx(0.624));
  CHECK(lgbm.colsample == doctest::Approx(0.8));
  CHECK(lgbm.l1_alpha == doctest::Approx(8.75));
  CHECK(lgbm.l2_lambda == doctest::Approx(2.179e-10));

  const auto etc = std::get<EtcConfig>(preset("etc-paper"));
  CHECK(etc.n_estimators == 950);
  CHECK(etc.min_samples_split == 2);
  CHECK(!etc.max_features.has_value());

  const auto cat = std::get<GbdtConfig>(preset("catboost-paper"));
  CHECK(cat.order == BoostOrder::second);
  CHECK(cat.max_depth == 11);
  CHECK(cat.colsample == doctest::Approx(0.093));

  const auto gbc = std::get<GbdtConfig>(preset("gbc-paper"));
  CHECK(gbc.order == BoostOrder::first);
  CHECK(gbc.learning_rate == doctest::Approx(0.211));
  CHECK(gbc.n_estimators == 158);
  CHECK(gbc.max_depth == 5);
  CHECK(gbc.subsample == doctest::Approx(0.8));

  CHECK(preset_names() == std::vector<std::string>{"xgb-paper", "lgbm-paper",
                                                   "etc-paper", "catboost-paper",
                                                   "gbc-paper"});
  CHECK(preset_label("lgbm-paper") == "LGBM");
  CHECK(preset_label("catboost") == "CatBoost");
  CHECK_THROWS_AS(preset("adaboost"), Error);

  const auto reseeded = with_seed(preset("xgb-paper"), 7);
  CHECK(std::get<GbdtConfig>(reseeded).seed == 7);
}

TEST_CASE("model JSON round-trips byte-identically and preserves predictions") {
  const auto t = random_table(40, 25, 4, 37);
  GbdtConfig cfg;
  cfg.n_estimators = 8;
  cfg.max_depth = 3;
  cfg.l1_alpha = 0.2;
  cfg.early_stopping_rounds = 4;
  const auto model = fit_gbdt(t, cfg);

  const auto doc = model_to_json(model);
  const auto revived = model_from_json(doc);
  CHECK(model_to_json(revived).dump() == doc.dump());
  CHECK(predict_proba(revived, t.features) == predict_proba(model, t.features));

  EtcConfig forest_cfg;
  forest_cfg.n_estimators = 9;
  const auto forest = fit_extra_trees(t, forest_cfg);
  const auto forest_doc = model_to_json(forest);
  const auto forest_back = model_from_json(forest_doc);
  CHECK(model_to_json(forest_back).dump() == forest_doc.dump());
  CHECK(predict_proba(forest_back, t.features) == predict_proba(forest, t.features));

  auto broken = doc;
  broken["kind"] = "mystery";
  CHECK_THROWS_AS(model_from_json(broken), Error);
}

TEST_CASE("fit_model dispatches on the preset alternative") {
  const auto t = random_table(30, 20, 3, 41);
  PresetConfig boosting = GbdtConfig{};
  std::get<GbdtConfig>(boosting).n_estimators = 5;
  CHECK(fit_model(t, boosting).kind == ModelKind::gbdt);
  PresetConfig forest = EtcConfig{};
  std::get<EtcConfig>(forest).n_estimators = 5;
  CHECK(fit_model(t, forest, 2).kind == ModelKind::extra_trees);
}
