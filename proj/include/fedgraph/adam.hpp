#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedgraph/dense.hpp"

namespace fedgraph {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // coupled L2: added to the gradient before moments
};

/// Per-tensor optimizer state. Every parameter tensor (each client's user
/// weights, each server tensor) owns an independent instance; states are
/// never shared or averaged.
struct AdamState {
  uint64_t step = 0;
  std::vector<double> m, v;

  explicit AdamState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
};

/// One bias-corrected Adam step with coupled weight decay. Throws on
/// non-finite gradient entries.
void adam_step(std::span<double> param, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg);

inline void adam_step(DenseMatrix& param, const DenseMatrix& grad, AdamState& state,
                      const AdamConfig& cfg) {
  if (!param.same_shape(grad)) throw std::invalid_argument("adam_step: shape mismatch");
  adam_step(std::span<double>(param.data), std::span<const double>(grad.data), state, cfg);
}

}  // namespace fedgraph
