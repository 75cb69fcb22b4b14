#include "fedgraph/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace fedgraph {

void adam_step(std::span<double> param, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg) {
  std::size_t k = param.size();
  if (grad.size() != k) throw std::invalid_argument("adam_step: shape mismatch");
  if (state.m.empty() && state.v.empty()) {
    state.m.assign(k, 0.0);
    state.v.assign(k, 0.0);
  }
  if (state.m.size() != k || state.v.size() != k)
    throw std::invalid_argument("adam_step: state size mismatch");

  state.step += 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));

  double* p = param.data();
  const double* g = grad.data();
  double* m = state.m.data();
  double* v = state.v.data();
  bool bad = false;
  for (std::size_t i = 0; i < k; ++i) {
    double gi = g[i];
    bad |= !(gi - gi == 0.0);  // NaN/Inf detection without libm calls
    gi += cfg.weight_decay * p[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gi * gi;
    double mhat = m[i] / bc1;
    double vhat = v[i] / bc2;
    p[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
  if (bad) throw std::runtime_error("adam_step: non-finite gradient");
}

}  // namespace fedgraph
