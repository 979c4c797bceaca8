#include "imbtab/gan/gan.hpp"

#include <cmath>

#include "imbtab/core/error.hpp"
#include "imbtab/data/correlate.hpp"

namespace imbtab::gan {
namespace {

// log(1 + e^x) without overflow.
Matrix softplus(const Matrix& x) {
  return x.array().max(0.0) + (-x.array().abs()).exp().log1p();
}

Matrix sigmoid(const Matrix& x) {
  return 1.0 / (1.0 + (-x.array()).exp());
}

Matrix noise_batch(Rng& rng, Index rows, Index dim) {
  Matrix z(rows, dim);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < dim; ++j) z(i, j) = rng.normal();
  }
  return z;
}

// Stream keys per purpose, all derived from the config seed.
constexpr std::uint64_t kInitKey = 0;

std::uint64_t epoch_key(int epoch, int purpose) {
  return 1 + static_cast<std::uint64_t>(epoch) * 3 + static_cast<std::uint64_t>(purpose);
}

}  // namespace

void GanConfig::validate() const {
  if (epochs < 1) throw Error("epochs must be >= 1");
  if (batch_size < 2) throw Error("batch_size must be >= 2");
  if (embedding_dim < 1) throw Error("embedding_dim must be >= 1");
  if (!(generator_lr > 0.0) || !(discriminator_lr > 0.0)) {
    throw Error("learning rates must be > 0");
  }
  for (Index d : generator_dims) {
    if (d < 1) throw Error("generator dims must be >= 1");
  }
  for (Index d : discriminator_dims) {
    if (d < 1) throw Error("discriminator dims must be >= 1");
  }
}

GanModel train_gan(const data::Table& minority_rows, const GanConfig& cfg,
                   const EpochCallback& callback) {
  cfg.validate();
  if (minority_rows.row_count() == 0) throw Error("train_gan on empty table");
  for (Index i = 1; i < minority_rows.labels.size(); ++i) {
    if (minority_rows.labels[i] != minority_rows.labels[0]) {
      throw Error("train_gan expects a single-class table");
    }
  }

  GanModel model;
  model.config = cfg;
  model.feature_names = minority_rows.feature_names;
  model.minority_label = minority_rows.labels[0];

  Matrix real;
  std::tie(model.transform, real) = fit_transform(minority_rows.features, cfg.variant);
  const Index n = real.rows();
  const Index d = real.cols();

  Rng root(cfg.seed);
  Rng init = root.split(kInitKey);
  model.generator = MlpParams::make(cfg.embedding_dim, cfg.generator_dims, d,
                                    Activation::relu, Activation::linear, init);
  model.discriminator = MlpParams::make(d, cfg.discriminator_dims, 1,
                                        Activation::leaky_relu, Activation::sigmoid,
                                        init);

  AdamState gen_state = AdamState::zeros_like(model.generator);
  AdamState disc_state = AdamState::zeros_like(model.discriminator);
  const AdamConfig gen_adam{.lr = cfg.generator_lr};
  const AdamConfig disc_adam{.lr = cfg.discriminator_lr};

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_stream = root.split(epoch_key(epoch, 0));
    Rng noise_disc = root.split(epoch_key(epoch, 1));
    Rng noise_gen = root.split(epoch_key(epoch, 2));
    shuffle_stream.shuffle(order);

    double disc_loss_sum = 0.0;
    double gen_loss_sum = 0.0;
    int steps = 0;

    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index m = std::min<Index>(cfg.batch_size, n - start);
      Matrix real_batch(m, d);
      for (Index i = 0; i < m; ++i) {
        real_batch.row(i) = real.row(order[static_cast<std::size_t>(start + i)]);
      }

      // Discriminator step: real -> 1, generated -> 0.
      const Matrix fake = mlp_forward(model.generator,
                                      noise_batch(noise_disc, m, cfg.embedding_dim));
      ForwardCache real_cache, fake_cache;
      mlp_forward(model.discriminator, real_batch, &real_cache);
      mlp_forward(model.discriminator, fake, &fake_cache);
      const Matrix& real_logits = real_cache.pre.back();
      const Matrix& fake_logits = fake_cache.pre.back();

      const double disc_loss = softplus(-real_logits).mean() + softplus(fake_logits).mean();
      const Matrix d_real = (sigmoid(real_logits).array() - 1.0) / static_cast<double>(m);
      const Matrix d_fake = sigmoid(fake_logits).array() / static_cast<double>(m);
      auto [disc_grads, unused_real] = mlp_backward(model.discriminator, real_cache, d_real);
      auto [disc_grads_fake, unused_fake] = mlp_backward(model.discriminator, fake_cache, d_fake);
      disc_grads.add(disc_grads_fake);
      adam_step(model.discriminator, disc_grads, disc_state, disc_adam);
      ++model.discriminator_steps;

      // Generator step: non-saturating loss, fresh noise.
      ForwardCache gen_cache, disc_cache;
      const Matrix fake2 = mlp_forward(model.generator,
                                       noise_batch(noise_gen, m, cfg.embedding_dim),
                                       &gen_cache);
      mlp_forward(model.discriminator, fake2, &disc_cache);
      const Matrix& logits2 = disc_cache.pre.back();
      const double gen_loss = softplus(-logits2).mean();
      const Matrix d_logits = (sigmoid(logits2).array() - 1.0) / static_cast<double>(m);
      auto [unused_grads, d_fake_input] = mlp_backward(model.discriminator, disc_cache, d_logits);
      auto [gen_grads, unused_input] = mlp_backward(model.generator, gen_cache, d_fake_input);
      adam_step(model.generator, gen_grads, gen_state, gen_adam);
      ++model.generator_steps;

      if (!std::isfinite(disc_loss) || !std::isfinite(gen_loss)) {
        throw NonFiniteLossError(static_cast<std::size_t>(epoch));
      }
      disc_loss_sum += disc_loss;
      gen_loss_sum += gen_loss;
      ++steps;
    }

    model.loss_history.push_back({gen_loss_sum / steps, disc_loss_sum / steps});
    if (callback && !callback(epoch, model)) break;
  }
  return model;
}

data::Table sample_synthetic(const GanModel& m, Index n, std::uint64_t seed) {
  data::Table out;
  out.feature_names = m.feature_names;
  const Index d = m.transform.col_count();
  if (n == 0) {
    out.features.resize(0, d);
    out.labels.resize(0);
    return out;
  }
  Rng rng(seed);
  const Matrix z = noise_batch(rng, n, m.config.embedding_dim);
  const Matrix generated = mlp_forward(m.generator, z);
  out.features = m.transform.invert(generated);
  out.labels = IntVector::Constant(n, m.minority_label);
  return out;
}

data::Table gan_balance(const data::Table& t, const GanConfig& cfg) {
  return gan_balance_traced(t, cfg).balanced;
}

BalanceTrace gan_balance_traced(const data::Table& t, const GanConfig& cfg) {
  BalanceTrace trace;
  const auto counts = data::class_counts(t);
  if (counts[0] == counts[1]) {
    trace.balanced = t;
    return trace;
  }
  const int minority = data::minority_label(t);
  const Index deficit = counts[1 - minority] - counts[minority];
  const auto minority_rows = data::select_rows(t, data::rows_with_label(t, minority));
  trace.model = train_gan(minority_rows, cfg);
  // Fixed sampling key so balance results depend only on (data, config).
  trace.synthetic = sample_synthetic(trace.model, deficit, derive_seed(cfg.seed, 0x5AULL));
  trace.balanced = data::concat_rows(t, trace.synthetic);
  trace.trained = true;
  return trace;
}

FidelityReport fidelity_report(const data::Table& real, const data::Table& synthetic) {
  if (real.feature_names != synthetic.feature_names) {
    throw ShapeMismatchError("fidelity_report on mismatched columns");
  }
  FidelityReport report;
  const Index d = real.col_count();

  const auto column_std = [](const ConstMatrixRef& m, Index c) {
    const double mean = m.col(c).mean();
    return std::sqrt((m.col(c).array() - mean).square().mean());
  };

  for (Index c = 0; c < d; ++c) {
    const double dm = std::abs(real.features.col(c).mean() - synthetic.features.col(c).mean());
    const double ds = std::abs(column_std(real.features, c) - column_std(synthetic.features, c));
    report.delta_mean.push_back(dm);
    report.delta_std.push_back(ds);
    report.max_delta_mean = std::max(report.max_delta_mean, dm);
    report.max_delta_std = std::max(report.max_delta_std, ds);
  }

  if (d >= 2 && real.row_count() >= 2 && synthetic.row_count() >= 2) {
    const Matrix cr = data::pearson_correlation(real.features);
    const Matrix cs = data::pearson_correlation(synthetic.features);
    for (Index i = 0; i < d; ++i) {
      for (Index j = i + 1; j < d; ++j) {
        report.max_correlation_gap =
            std::max(report.max_correlation_gap, std::abs(cr(i, j) - cs(i, j)));
      }
    }
  }
  return report;
}

}  // namespace imbtab::gan
