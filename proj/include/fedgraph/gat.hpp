#pragma once

#include <span>
#include <vector>

#include "fedgraph/dense.hpp"
#include "fedgraph/graph.hpp"
#include "fedgraph/ops.hpp"
#include "fedgraph/sim_types.hpp"

namespace fedgraph {

// Split GAT. The user holds one projection per attention head; the shared
// attention mechanisms, the second layer and all neighborhood softmaxes live
// server-side. Head latents are stored head-major: column block
// [l*hidden, (l+1)*hidden) of an n x (heads*hidden) matrix belongs to head l.

struct GatUserModel {
  std::vector<DenseMatrix> heads;  // each d x hidden
};

/// All head latents from the same dropped input, concatenated head-major.
std::vector<double> gat_user_forward(const GatUserModel& m, std::span<const double> x,
                                     const ops::DropoutSpec& input_drop, bool training);

/// Per-head weight gradients from the latent gradient row (length heads*hidden).
std::vector<DenseMatrix> gat_user_weight_grads(std::span<const double> x,
                                               std::span<const double> grad_latent,
                                               const ops::DropoutSpec& input_drop, bool training,
                                               std::size_t hidden, std::size_t heads);

struct GatServerModel {
  DenseMatrix attn1;  // heads x 2*hidden; row l = [a_left | a_right] of head l
  DenseMatrix w2;     // (heads*hidden) x c
  DenseMatrix attn2;  // 1 x 2*c

  std::size_t heads() const { return attn1.rows; }
  std::size_t hidden() const { return attn1.cols / 2; }
};

/// Saved attention state for one softmax-aggregate layer instance; alpha is
/// stored pre-dropout, aligned with the neighbor-set CSR slots.
struct GatAttnContext {
  std::vector<double> pre;    // leaky-relu inputs per slot
  std::vector<double> alpha;  // row-softmaxed coefficients per slot
  ops::DropoutSpec drop;
};

struct GatServerContext {
  DenseMatrix latents;
  std::vector<GatAttnContext> head_attn;
  std::vector<DenseMatrix> s_pre_elu;  // per head, n x hidden
  DenseMatrix h_dropped;               // concatenated heads after feature dropout
  ops::DropoutSpec feat_drop;
  DenseMatrix u;                       // h_dropped * w2
  GatAttnContext attn2;
  bool training = false;
};

struct GatDropoutSpecs {
  std::vector<ops::DropoutSpec> attn1;  // one per head
  ops::DropoutSpec feat;
  ops::DropoutSpec attn2;
};

struct GatServerForward {
  DenseMatrix logits;
  DenseMatrix probs;
};

/// Layer 1: per-head attention over N_i on the uploaded latents, ELU, concat.
/// Layer 2: single-head attention on the projected features, softmax output.
/// Attention coefficients and layer-2 input features are dropped at the
/// configured rate during training.
GatServerForward gat_server_forward(const GatServerModel& model, const NeighborSets& nbrs,
                                    const DenseMatrix& latents, const GatDropoutSpecs& drops,
                                    bool training, GatServerContext* ctx, int threads = 1);

struct GatServerGrads {
  DenseMatrix attn1, w2, attn2;
  DenseMatrix latents;  // n x heads*hidden; row i is dispatched to client i
};

GatServerGrads gat_server_backward(const GatServerModel& model, const NeighborSets& nbrs,
                                   const GatServerContext& ctx, const DenseMatrix& grad_logits,
                                   int threads = 1);

/// Shared-weight 2-layer GAT oracle trained on the full feature matrix.
std::vector<RoundTranscript> train_centralized_gat(const Graph& g, const DenseMatrix& features,
                                                   const RunConfig& cfg);

/// Eval-mode centralized forward for tied-weight equivalence checks.
DenseMatrix centralized_gat_forward(const NeighborSets& nbrs, const DenseMatrix& features,
                                    const std::vector<DenseMatrix>& head_ws,
                                    const GatServerModel& model, int threads = 1);

}  // namespace fedgraph
