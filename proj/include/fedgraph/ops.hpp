#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedgraph/dense.hpp"
#include "fedgraph/graph.hpp"

namespace fedgraph::ops {

// Forward kernels paired with exact adjoints. Each backward is the adjoint of
// the forward's linearization at the saved inputs; finite_diff checks in the
// test suite gate every pair. Kernels are pure functions of their arguments
// (dropout draws from an explicit counter stream), so parallel invocation on
// disjoint data is safe.

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, int threads = 1);
/// aᵀ · b, accumulated from per-chunk partials reduced in fixed order.
DenseMatrix matmul_transpose_a(const DenseMatrix& a, const DenseMatrix& b, int threads = 1);
/// a · bᵀ.
DenseMatrix matmul_transpose_b(const DenseMatrix& a, const DenseMatrix& b, int threads = 1);
void matmul_backward(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& grad_out,
                     DenseMatrix* grad_a, DenseMatrix* grad_b, int threads = 1);

DenseMatrix spmm(const NormalizedAdjacency& adj, const DenseMatrix& x, int threads = 1);
/// grad_x of y = Âx is Âᵀ·grad_y; Â is symmetric so this is spmm again.
DenseMatrix spmm_backward(const NormalizedAdjacency& adj, const DenseMatrix& grad_out,
                          int threads = 1);

DenseMatrix relu(const DenseMatrix& x);
DenseMatrix relu_backward(const DenseMatrix& x, const DenseMatrix& grad_out);  // relu'(0)=0
DenseMatrix leaky_relu(const DenseMatrix& x, double slope);
DenseMatrix leaky_relu_backward(const DenseMatrix& x, const DenseMatrix& grad_out, double slope);
DenseMatrix elu(const DenseMatrix& x);
DenseMatrix elu_backward(const DenseMatrix& x, const DenseMatrix& grad_out);

DenseMatrix concat_cols(const std::vector<const DenseMatrix*>& blocks);
std::vector<DenseMatrix> concat_cols_backward(const DenseMatrix& grad_out,
                                              const std::vector<std::size_t>& widths);

/// Inverted dropout over a fixed counter stream: entry k is zeroed when
/// uniform(key, counter0 + k) < rate, survivors scale by 1/(1-rate).
/// The backward masks identically by replaying the same stream.
struct DropoutSpec {
  uint64_t key = 0;
  uint64_t counter0 = 0;
  double rate = 0.0;

  bool keeps(std::size_t k) const;
};

DenseMatrix dropout(const DenseMatrix& x, const DropoutSpec& spec, bool training,
                    int threads = 1);
DenseMatrix dropout_backward(const DenseMatrix& grad_out, const DropoutSpec& spec,
                             bool training, int threads = 1);

DenseMatrix row_softmax(const DenseMatrix& logits);

struct CrossEntropyResult {
  double loss = 0.0;          // summed over the mask, not averaged
  DenseMatrix grad_logits;    // softmax(row) - onehot(y) on mask rows, zero elsewhere
};

/// Softmax cross-entropy summed over the masked rows.
CrossEntropyResult masked_softmax_cross_entropy(const DenseMatrix& logits,
                                                std::span<const int32_t> labels,
                                                std::span<const uint32_t> mask);

}  // namespace fedgraph::ops
