#pragma once

#include <utility>
#include <vector>

#include "imbtab/core/rng.hpp"
#include "imbtab/core/types.hpp"

namespace imbtab::gan {

enum class Activation { relu, leaky_relu, linear, sigmoid };

constexpr double kLeakySlope = 0.2;

struct Layer {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::linear;
};

struct MlpParams {
  std::vector<Layer> layers;

  Index input_width() const { return layers.front().weight.cols(); }
  Index output_width() const { return layers.back().weight.rows(); }

  /// He-style normal init scaled by fan-in; bias zero.
  static MlpParams make(Index input, const std::vector<Index>& hidden,
                        Index output, Activation hidden_activation,
                        Activation output_activation, Rng& rng);
};

/// Activations per layer from a forward pass; post[0] is the input batch,
/// pre[l] the pre-activation of layer l.
struct ForwardCache {
  std::vector<Matrix> pre;
  std::vector<Matrix> post;
};

/// Row-major batch in, activations out. Pass a cache to keep what backward
/// needs; the discriminator's logits are cache.pre.back().
Matrix mlp_forward(const MlpParams& p, const ConstMatrixRef& batch,
                   ForwardCache* cache = nullptr);

struct MlpGradients {
  std::vector<Matrix> dweight;
  std::vector<Vector> dbias;

  static MlpGradients zeros_like(const MlpParams& p);
  void add(const MlpGradients& other);
};

/// Backpropagates d_last_pre = dL/d(final pre-activation) through the cached
/// pass. Returns parameter gradients and dL/d(input batch); the latter is what
/// the generator consumes when the discriminator is frozen.
std::pair<MlpGradients, Matrix> mlp_backward(const MlpParams& p,
                                             const ForwardCache& cache,
                                             const ConstMatrixRef& d_last_pre);

}  // namespace imbtab::gan
