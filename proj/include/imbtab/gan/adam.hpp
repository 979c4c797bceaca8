#pragma once

#include "imbtab/gan/mlp.hpp"

namespace imbtab::gan {

// beta1 = 0.5 is common practice for adversarial training.
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Matrix> m_weight, v_weight;
  std::vector<Vector> m_bias, v_bias;
  long step = 0;

  static AdamState zeros_like(const MlpParams& p);
};

/// Standard bias-corrected Adam update, in place.
void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace imbtab::gan
