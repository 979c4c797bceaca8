#include "imbtab/gan/adam.hpp"

#include <cmath>

namespace imbtab::gan {

AdamState AdamState::zeros_like(const MlpParams& p) {
  AdamState s;
  for (const auto& layer : p.layers) {
    s.m_weight.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
    s.v_weight.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
    s.m_bias.push_back(Vector::Zero(layer.bias.size()));
    s.v_bias.push_back(Vector::Zero(layer.bias.size()));
  }
  return s;
}

void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state,
               const AdamConfig& cfg) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, state.step);
  const double bc2 = 1.0 - std::pow(cfg.beta2, state.step);

  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& mw = state.m_weight[l];
    auto& vw = state.v_weight[l];
    mw = cfg.beta1 * mw + (1.0 - cfg.beta1) * grads.dweight[l];
    vw = cfg.beta2 * vw.array() + (1.0 - cfg.beta2) * grads.dweight[l].array().square();
    params.layers[l].weight.array() -=
        cfg.lr * (mw.array() / bc1) / ((vw.array() / bc2).sqrt() + cfg.epsilon);

    auto& mb = state.m_bias[l];
    auto& vb = state.v_bias[l];
    mb = cfg.beta1 * mb + (1.0 - cfg.beta1) * grads.dbias[l];
    vb = cfg.beta2 * vb.array() + (1.0 - cfg.beta2) * grads.dbias[l].array().square();
    params.layers[l].bias.array() -=
        cfg.lr * (mb.array() / bc1) / ((vb.array() / bc2).sqrt() + cfg.epsilon);
  }
}

}  // namespace imbtab::gan
