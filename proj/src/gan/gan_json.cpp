#include "imbtab/gan/gan_json.hpp"

#include <string>
#include <utility>

#include "imbtab/core/error.hpp"

namespace imbtab::gan {
namespace {

using nlohmann::ordered_json;

std::string variant_name(GanVariant v) {
  return v == GanVariant::copula ? "copula" : "vanilla";
}

GanVariant variant_from_name(const std::string& name) {
  if (name == "copula") return GanVariant::copula;
  if (name == "vanilla") return GanVariant::vanilla;
  throw Error("unknown gan variant: " + name);
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::linear: return "linear";
    case Activation::sigmoid: return "sigmoid";
  }
  throw Error("unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu") return Activation::leaky_relu;
  if (name == "linear") return Activation::linear;
  if (name == "sigmoid") return Activation::sigmoid;
  throw Error("unknown activation: " + name);
}

ordered_json vector_to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const ordered_json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const ordered_json& rows) {
  if (rows.empty()) throw Error("weight matrix must not be empty");
  const auto n_rows = static_cast<Index>(rows.size());
  const auto n_cols = static_cast<Index>(rows.front().size());
  Matrix m(n_rows, n_cols);
  Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n_cols) {
      throw Error("weight matrix rows must have equal length");
    }
    Index c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

ordered_json mlp_to_json(const MlpParams& p) {
  ordered_json layers = ordered_json::array();
  for (const Layer& layer : p.layers) {
    ordered_json j;
    j["activation"] = activation_name(layer.activation);
    j["weight"] = matrix_to_json(layer.weight);
    j["bias"] = vector_to_json(layer.bias);
    layers.push_back(std::move(j));
  }
  return layers;
}

MlpParams mlp_from_json(const ordered_json& layers) {
  if (layers.empty()) throw Error("network must have at least one layer");
  MlpParams p;
  for (const auto& j : layers) {
    Layer layer;
    layer.activation = activation_from_name(j.at("activation"));
    layer.weight = matrix_from_json(j.at("weight"));
    layer.bias = vector_from_json(j.at("bias"));
    if (layer.bias.size() != layer.weight.rows()) {
      throw Error("bias length must match weight rows");
    }
    if (!p.layers.empty() && layer.weight.cols() != p.layers.back().weight.rows()) {
      throw Error("layer widths must chain");
    }
    p.layers.push_back(std::move(layer));
  }
  return p;
}

ordered_json config_to_json(const GanConfig& cfg) {
  ordered_json j;
  j["epochs"] = cfg.epochs;
  j["generator_dims"] = cfg.generator_dims;
  j["discriminator_dims"] = cfg.discriminator_dims;
  j["embedding_dim"] = cfg.embedding_dim;
  j["generator_lr"] = cfg.generator_lr;
  j["discriminator_lr"] = cfg.discriminator_lr;
  j["batch_size"] = cfg.batch_size;
  j["variant"] = variant_name(cfg.variant);
  j["seed"] = cfg.seed;
  return j;
}

GanConfig config_from_json(const ordered_json& j) {
  GanConfig cfg;
  cfg.epochs = j.at("epochs");
  cfg.generator_dims = j.at("generator_dims").get<std::vector<Index>>();
  cfg.discriminator_dims = j.at("discriminator_dims").get<std::vector<Index>>();
  cfg.embedding_dim = j.at("embedding_dim");
  cfg.generator_lr = j.at("generator_lr");
  cfg.discriminator_lr = j.at("discriminator_lr");
  cfg.batch_size = j.at("batch_size");
  cfg.variant = variant_from_name(j.at("variant"));
  cfg.seed = j.at("seed");
  cfg.validate();
  return cfg;
}

ordered_json transform_to_json(const FeatureTransform& t) {
  ordered_json j;
  j["variant"] = variant_name(t.variant);
  j["mean"] = vector_to_json(t.mean);
  j["std_dev"] = vector_to_json(t.std_dev);
  ordered_json quantiles = ordered_json::array();
  for (const Vector& q : t.quantiles) quantiles.push_back(vector_to_json(q));
  j["quantiles"] = std::move(quantiles);
  j["constant_cols"] = t.constant_cols;
  return j;
}

FeatureTransform transform_from_json(const ordered_json& j) {
  FeatureTransform t;
  t.variant = variant_from_name(j.at("variant"));
  t.mean = vector_from_json(j.at("mean"));
  t.std_dev = vector_from_json(j.at("std_dev"));
  for (const auto& q : j.at("quantiles")) t.quantiles.push_back(vector_from_json(q));
  t.constant_cols = j.at("constant_cols").get<std::vector<Index>>();
  if (t.mean.size() != t.std_dev.size()) {
    throw Error("transform mean/std_dev lengths must match");
  }
  return t;
}

}  // namespace

ordered_json gan_to_json(const GanModel& m) {
  ordered_json j;
  j["kind"] = "gan";
  j["config"] = config_to_json(m.config);
  j["minority_label"] = m.minority_label;
  j["feature_names"] = m.feature_names;
  j["transform"] = transform_to_json(m.transform);
  j["generator"] = mlp_to_json(m.generator);
  j["discriminator"] = mlp_to_json(m.discriminator);
  ordered_json losses = ordered_json::array();
  for (const EpochLoss& l : m.loss_history) {
    ordered_json e;
    e["generator"] = l.generator;
    e["discriminator"] = l.discriminator;
    losses.push_back(std::move(e));
  }
  j["loss_history"] = std::move(losses);
  j["generator_steps"] = m.generator_steps;
  j["discriminator_steps"] = m.discriminator_steps;
  return j;
}

GanModel gan_from_json(const ordered_json& doc) {
  const std::string kind = doc.at("kind");
  if (kind != "gan") throw Error("unknown model kind: " + kind);
  GanModel m;
  m.config = config_from_json(doc.at("config"));
  m.minority_label = doc.at("minority_label");
  if (m.minority_label != 0 && m.minority_label != 1) {
    throw Error("minority_label must be 0 or 1");
  }
  m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  m.transform = transform_from_json(doc.at("transform"));
  m.generator = mlp_from_json(doc.at("generator"));
  m.discriminator = mlp_from_json(doc.at("discriminator"));
  if (m.generator.input_width() != m.config.embedding_dim) {
    throw Error("generator input width must equal embedding_dim");
  }
  if (m.generator.output_width() != static_cast<Index>(m.feature_names.size())) {
    throw Error("generator output width must equal feature count");
  }
  for (const auto& e : doc.at("loss_history")) {
    m.loss_history.push_back({e.at("generator"), e.at("discriminator")});
  }
  m.generator_steps = doc.at("generator_steps");
  m.discriminator_steps = doc.at("discriminator_steps");
  return m;
}

ordered_json fidelity_to_json(const FidelityReport& r) {
  ordered_json j;
  j["delta_mean"] = r.delta_mean;
  j["delta_std"] = r.delta_std;
  j["max_delta_mean"] = r.max_delta_mean;
  j["max_delta_std"] = r.max_delta_std;
  j["max_correlation_gap"] = r.max_correlation_gap;
  j["combined_gap"] = r.combined_gap();
  return j;
}

}  // namespace imbtab::gan
