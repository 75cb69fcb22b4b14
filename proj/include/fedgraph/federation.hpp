#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedgraph/adam.hpp"
#include "fedgraph/dense.hpp"
#include "fedgraph/gat.hpp"
#include "fedgraph/gcn.hpp"
#include "fedgraph/graph.hpp"
#include "fedgraph/sim_types.hpp"

namespace fedgraph {

/// One node's private side of the federation. The feature vector never
/// leaves the client: no message carries it or any function of it other
/// than the declared latents (and, in cnfgnn mode, the user model).
struct ClientState {
  uint32_t id = 0;
  std::vector<double> features;
  GcnUserModel gcn;
  GatUserModel gat;
  std::vector<AdamState> opt;  // one per user tensor, never shared or averaged
  uint64_t drop_key = 0;
};

/// The server holds topology, labels and the server-side model; it stores
/// only uploaded latents and dispatched gradients, never raw features.
struct ServerState {
  NormalizedAdjacency adj;
  NeighborSets nbrs;
  std::vector<int32_t> labels;
  std::vector<uint32_t> train_mask, test_mask;
  GcnServerModel gcn;
  GatServerModel gat;
  std::vector<AdamState> opt;
  double lambda = 0.0;
  uint32_t round = 0;  // rounds completed
  uint64_t drop_key = 0;
};

enum class MessageKind : uint8_t { latent = 0, grad = 1, params = 2 };

/// In-simulator message, also the wire schema for a networked deployment:
/// little-endian round:u32, node:u32, kind:u8, len:u32, payload len x f32.
struct Message {
  uint32_t round = 0;
  uint32_t node = 0;
  MessageKind kind = MessageKind::latent;
  std::vector<float> payload;

  std::vector<uint8_t> encode() const;
  static Message decode(std::span<const uint8_t> bytes);
};

/// Uniform elementwise mean of all user models, broadcast back to every
/// client. Optimizer states are left untouched.
void fedavg_user_models(std::vector<ClientState>& clients, Model model, int threads = 1);

/// Synchronous round engine. Per round: clients upload latents; the server
/// runs the forward pass, takes its optimizer step, and sends each client
/// the gradient of the total loss with respect to its latent (cross-entropy
/// plus lambda times the regularizer term); clients backprop and step. In
/// cnfgnn mode the updated user models are then uploaded, averaged and
/// broadcast. Client phases run in parallel over disjoint rows; every
/// cross-client reduction uses fixed node-id order.
class Simulation {
 public:
  Simulation(const Graph& g, const DenseMatrix& features, const RunConfig& cfg);

  RoundTranscript run_round();
  std::vector<RoundTranscript> train();  // cfg.rounds rounds, aborts on divergence

  /// Eval-mode forward (dropout off) with the current parameters.
  DenseMatrix eval_probs();

  std::size_t latent_dim() const;
  std::size_t params_per_user() const;

  ServerState& server() { return server_; }
  std::vector<ClientState>& clients() { return clients_; }
  const std::vector<Message>& captured_messages() const { return messages_; }

 private:
  DenseMatrix collect_latents(uint32_t round, bool training);

  RunConfig cfg_;
  ServerState server_;
  std::vector<ClientState> clients_;
  std::vector<Message> messages_;
};

std::size_t latent_dim_for(Model model, int hidden, int heads);
std::size_t user_params_for(Model model, std::size_t feature_dim, int hidden, int heads);

/// Closed-form communication figures; when transcripts are supplied the
/// metered per-round byte counts are summed instead (tests assert both
/// routes agree exactly).
CommReport comm_cost_report(const RunConfig& cfg, std::size_t n, std::size_t feature_dim,
                            const std::vector<RoundTranscript>* transcripts = nullptr);

}  // namespace fedgraph
