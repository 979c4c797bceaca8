#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "imbtab/data/table.hpp"
#include "imbtab/gan/adam.hpp"
#include "imbtab/gan/mlp.hpp"
#include "imbtab/gan/transform.hpp"

namespace imbtab::gan {

struct GanConfig {
  int epochs = 200;
  std::vector<Index> generator_dims{32, 288};
  std::vector<Index> discriminator_dims{224, 192};
  Index embedding_dim = 416;  // noise vector length
  double generator_lr = 1.091e-3;
  double discriminator_lr = 5.402e-3;
  Index batch_size = 128;
  GanVariant variant = GanVariant::copula;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochLoss {
  double generator = 0.0;
  double discriminator = 0.0;
};

struct GanModel {
  MlpParams generator;      // noise -> transformed feature space, ReLU hidden
  MlpParams discriminator;  // features -> (0,1), LeakyReLU hidden
  FeatureTransform transform;
  GanConfig config;
  std::vector<std::string> feature_names;
  int minority_label = 1;
  std::vector<EpochLoss> loss_history;
  long discriminator_steps = 0;
  long generator_steps = 0;
};

/// Called after each epoch; return false to stop training early (used by the
/// tuner's pruning hook).
using EpochCallback = std::function<bool(int epoch, const GanModel& model)>;

/// Adversarial training on minority rows: per minibatch one discriminator
/// step (real batch target 1, generated batch target 0, binary cross-entropy)
/// followed by one generator step on the non-saturating loss. Losses are
/// computed from logits, so they stay finite unless the optimization itself
/// diverges, which aborts with NonFiniteLossError. Deterministic in
/// (data, config, seed).
GanModel train_gan(const data::Table& minority_rows, const GanConfig& cfg,
                   const EpochCallback& callback = {});

/// n generated rows mapped back to feature space, labeled with the training
/// class. Deterministic in (model, n, seed).
data::Table sample_synthetic(const GanModel& m, Index n, std::uint64_t seed);

/// Balances class counts by training on the minority rows and appending
/// synthetic minority rows until the classes match. Already-balanced input
/// is returned unchanged without training. Deterministic in (t, cfg).
data::Table gan_balance(const data::Table& t, const GanConfig& cfg);

/// gan_balance plus the artifacts it produced along the way: the trained
/// model and the synthetic block, for callers that persist or audit them.
/// `trained` is false when the input was already balanced (model and
/// synthetic are then default-constructed).
struct BalanceTrace {
  data::Table balanced;
  bool trained = false;
  GanModel model;
  data::Table synthetic;
};

BalanceTrace gan_balance_traced(const data::Table& t, const GanConfig& cfg);

struct FidelityReport {
  std::vector<double> delta_mean;  // per column, absolute
  std::vector<double> delta_std;
  double max_delta_mean = 0.0;
  double max_delta_std = 0.0;
  double max_correlation_gap = 0.0;

  /// Scalar the tuner minimizes: sum of the three worst-case gaps.
  double combined_gap() const {
    return max_delta_mean + max_delta_std + max_correlation_gap;
  }
};

FidelityReport fidelity_report(const data::Table& real, const data::Table& synthetic);

}  // namespace imbtab::gan
