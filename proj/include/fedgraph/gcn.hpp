#pragma once

#include <span>
#include <vector>

#include "fedgraph/adam.hpp"
#include "fedgraph/dense.hpp"
#include "fedgraph/graph.hpp"
#include "fedgraph/ops.hpp"
#include "fedgraph/sim_types.hpp"

namespace fedgraph {

/// Glorot-uniform init, every entry drawn from the keyed counter stream so
/// per-client tensors are independent yet reproducible under parallelism.
DenseMatrix glorot_uniform(std::size_t rows, std::size_t cols, uint64_t key);

// --- user side -------------------------------------------------------------

struct GcnUserModel {
  DenseMatrix w;  // d x hidden
};

/// Latent for one client: dropout(x) * W. Input dropout runs user-side; the
/// mask is a pure function of the spec, so backward replays it exactly.
std::vector<double> gcn_user_forward(const DenseMatrix& w, std::span<const double> x,
                                     const ops::DropoutSpec& input_drop, bool training);

/// grad W = dropout(x)^T (outer) g, through the saved dropout stream.
DenseMatrix gcn_user_weight_grad(std::span<const double> x, std::span<const double> g,
                                 const ops::DropoutSpec& input_drop, bool training,
                                 std::size_t hidden);

/// Fused user backward and Adam step: identical arithmetic to
/// adam_step(w, gcn_user_weight_grad(...)) without materializing the
/// d x hidden gradient. This keeps the per-round client update at one pass
/// over (w, m, v) instead of allocating a gradient matrix per client.
void gcn_user_update(DenseMatrix& w, std::span<const double> x, std::span<const double> g,
                     const ops::DropoutSpec& input_drop, bool training, AdamState& state,
                     const AdamConfig& opt);

// --- server side -------------------------------------------------------------

struct GcnServerModel {
  DenseMatrix w1;  // hidden x c
};

struct GcnServerContext {
  DenseMatrix h1;       // A_hat * latents, pre-relu
  DenseMatrix agg_h;    // A_hat * dropout(relu(h1)); the input to W1
  ops::DropoutSpec hidden_drop;
  bool training = false;
};

struct GcnServerForward {
  DenseMatrix logits;
  DenseMatrix probs;  // row softmax of logits; rows sum to 1
};

/// Z = softmax(A_hat * dropout(relu(A_hat * latents)) * W1); hidden dropout
/// runs server-side. Pass ctx to keep what backward needs.
GcnServerForward gcn_server_forward(const GcnServerModel& model, const NormalizedAdjacency& adj,
                                    const DenseMatrix& latents,
                                    const ops::DropoutSpec& hidden_drop, bool training,
                                    GcnServerContext* ctx, int threads = 1);

struct GcnServerGrads {
  DenseMatrix w1;       // grad of the server weight
  DenseMatrix latents;  // grad of the uploaded latents; row i goes to client i
};

GcnServerGrads gcn_server_backward(const GcnServerModel& model, const NormalizedAdjacency& adj,
                                   const GcnServerContext& ctx, const DenseMatrix& grad_logits,
                                   int threads = 1);

// --- centralized reference ---------------------------------------------------

/// Standard 2-layer GCN with one shared first-layer weight, trained on the
/// full feature matrix. Test-harness oracle only: it sees all features at
/// once, which the federated protocol forbids by construction.
std::vector<RoundTranscript> train_centralized_gcn(const Graph& g, const DenseMatrix& features,
                                                   const RunConfig& cfg);

/// Eval-mode centralized forward (Z probabilities) for equivalence oracles.
DenseMatrix centralized_gcn_forward(const NormalizedAdjacency& adj, const DenseMatrix& features,
                                    const DenseMatrix& w0, const DenseMatrix& w1,
                                    int threads = 1);

}  // namespace fedgraph
