#include "imbtab/gan/mlp.hpp"

#include <cmath>

#include "imbtab/core/error.hpp"

namespace imbtab::gan {
namespace {

Matrix activate(const Matrix& z, Activation activation) {
  switch (activation) {
    case Activation::relu:
      return z.array().max(0.0);
    case Activation::leaky_relu:
      return z.array().max(kLeakySlope * z.array());
    case Activation::linear:
      return z;
    case Activation::sigmoid:
      return (1.0 / (1.0 + (-z.array()).exp()));
  }
  return z;
}

// Derivative as a function of pre-activation (post needed for sigmoid).
Matrix activate_grad(const Matrix& z, const Matrix& a, Activation activation) {
  switch (activation) {
    case Activation::relu:
      return (z.array() > 0.0).cast<double>();
    case Activation::leaky_relu:
      return (z.array() > 0.0).select(Matrix::Ones(z.rows(), z.cols()),
                                      Matrix::Constant(z.rows(), z.cols(), kLeakySlope));
    case Activation::linear:
      return Matrix::Ones(z.rows(), z.cols());
    case Activation::sigmoid:
      return a.array() * (1.0 - a.array());
  }
  return Matrix::Ones(z.rows(), z.cols());
}

}  // namespace

MlpParams MlpParams::make(Index input, const std::vector<Index>& hidden,
                          Index output, Activation hidden_activation,
                          Activation output_activation, Rng& rng) {
  MlpParams p;
  std::vector<Index> widths{input};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(output);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    const Index fan_in = widths[l];
    const Index fan_out = widths[l + 1];
    const bool is_output = l + 2 == widths.size();
    const double scale = std::sqrt((is_output ? 1.0 : 2.0) / static_cast<double>(fan_in));
    layer.weight.resize(fan_out, fan_in);
    for (Index i = 0; i < fan_out; ++i) {
      for (Index j = 0; j < fan_in; ++j) {
        layer.weight(i, j) = scale * rng.normal();
      }
    }
    layer.bias = Vector::Zero(fan_out);
    layer.activation = is_output ? output_activation : hidden_activation;
    p.layers.push_back(std::move(layer));
  }
  return p;
}

Matrix mlp_forward(const MlpParams& p, const ConstMatrixRef& batch,
                   ForwardCache* cache) {
  if (batch.cols() != p.input_width()) {
    throw ShapeMismatchError("mlp input width " + std::to_string(batch.cols()) +
                             ", expected " + std::to_string(p.input_width()));
  }
  if (cache) {
    cache->pre.clear();
    cache->post.clear();
    cache->post.push_back(batch);
  }
  Matrix a = batch;
  for (const auto& layer : p.layers) {
    Matrix z = a * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    a = activate(z, layer.activation);
    if (cache) {
      cache->pre.push_back(std::move(z));
      cache->post.push_back(a);
    }
  }
  return a;
}

MlpGradients MlpGradients::zeros_like(const MlpParams& p) {
  MlpGradients g;
  for (const auto& layer : p.layers) {
    g.dweight.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
    g.dbias.push_back(Vector::Zero(layer.bias.size()));
  }
  return g;
}

void MlpGradients::add(const MlpGradients& other) {
  for (std::size_t l = 0; l < dweight.size(); ++l) {
    dweight[l] += other.dweight[l];
    dbias[l] += other.dbias[l];
  }
}

std::pair<MlpGradients, Matrix> mlp_backward(const MlpParams& p,
                                             const ForwardCache& cache,
                                             const ConstMatrixRef& d_last_pre) {
  const auto n_layers = p.layers.size();
  MlpGradients grads;
  grads.dweight.resize(n_layers);
  grads.dbias.resize(n_layers);

  Matrix dz = d_last_pre;
  for (std::size_t l = n_layers; l-- > 0;) {
    grads.dweight[l].noalias() = dz.transpose() * cache.post[l];
    grads.dbias[l] = dz.colwise().sum();
    if (l == 0) {
      return {std::move(grads), dz * p.layers[0].weight};
    }
    Matrix da = dz * p.layers[l].weight;
    dz = da.array() *
         activate_grad(cache.pre[l - 1], cache.post[l], p.layers[l - 1].activation)
             .array();
  }
  return {std::move(grads), Matrix()};
}

}  // namespace imbtab::gan
