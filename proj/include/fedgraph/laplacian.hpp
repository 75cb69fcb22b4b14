#pragma once

#include <cstddef>

#include "fedgraph/dense.hpp"
#include "fedgraph/graph.hpp"

namespace fedgraph {

/// Graph Laplacian penalty on uploaded latents:
///   (1 / sum_i |N_i|) * sum_i sum_{j in N_i} ||x_i - x_j||^2,
/// with N_i including the node itself (self pairs add zero to the numerator
/// but count in the denominator) and both ordered pairs summed. For
/// multi-head latents stored as column blocks, the per-head values are
/// averaged, which equals the whole-matrix value divided by the head count.
double laplacian_reg(const DenseMatrix& latents, const NeighborSets& nbrs,
                     std::size_t heads = 1);

/// Row i of the gradient: (4 / sum|N|) * sum_{j in N_i, j != i} (x_i - x_j),
/// scaled by 1/heads for head-averaged latents.
DenseMatrix laplacian_reg_grad(const DenseMatrix& latents, const NeighborSets& nbrs,
                               std::size_t heads = 1, int threads = 1);

inline double total_loss(double ce, double reg, double lambda) { return ce + lambda * reg; }

}  // namespace fedgraph
