#include "arcparse/adam.h"

#include <cmath>
#include <string>

namespace arcparse {

AdamState AdamState::For(const ModelParams& params) {
  return AdamState{params.ZerosLike(), params.ZerosLike(), 0};
}

void AdamStep(ModelParams& params, const ModelParams& grads, AdamState& state,
              const AdamConfig& config) {
  grads.ForEachBlock([](std::string_view name, const MatrixX<float>& g) {
    if (!g.allFinite()) {
      throw NonFiniteGradient("non-finite gradient in parameter block '" + std::string(name) +
                              "'");
    }
  });

  ++state.step;
  const double t = static_cast<double>(state.step);
  const float beta1 = static_cast<float>(config.beta1);
  const float beta2 = static_cast<float>(config.beta2);
  const float correction1 = static_cast<float>(1.0 - std::pow(config.beta1, t));
  const float correction2 = static_cast<float>(1.0 - std::pow(config.beta2, t));
  const float alpha = static_cast<float>(config.alpha);
  const float epsilon = static_cast<float>(config.epsilon);

  std::vector<const MatrixX<float>*> grad_blocks;
  grads.ForEachBlock(
      [&](std::string_view, const MatrixX<float>& g) { grad_blocks.push_back(&g); });
  std::vector<MatrixX<float>*> m_blocks;
  std::vector<MatrixX<float>*> v_blocks;
  state.m.ForEachBlock([&](std::string_view, MatrixX<float>& m) { m_blocks.push_back(&m); });
  state.v.ForEachBlock([&](std::string_view, MatrixX<float>& v) { v_blocks.push_back(&v); });

  std::size_t i = 0;
  params.ForEachBlock([&](std::string_view, MatrixX<float>& p) {
    const auto g = grad_blocks[i]->array();
    auto m = m_blocks[i]->array();
    auto v = v_blocks[i]->array();
    m = beta1 * m + (1.0f - beta1) * g;
    v = beta2 * v + (1.0f - beta2) * g.square();
    p.array() -= alpha * (m / correction1) / ((v / correction2).sqrt() + epsilon);
    ++i;
  });
}

}  // namespace arcparse
