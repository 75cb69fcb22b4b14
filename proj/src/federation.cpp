#include "fedgraph/federation.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "fedgraph/laplacian.hpp"
#include "fedgraph/parallel.hpp"
#include "fedgraph/rng.hpp"

namespace fedgraph {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t get_u32(std::span<const uint8_t> b, std::size_t at) {
  return static_cast<uint32_t>(b[at]) | static_cast<uint32_t>(b[at + 1]) << 8 |
         static_cast<uint32_t>(b[at + 2]) << 16 | static_cast<uint32_t>(b[at + 3]) << 24;
}

std::vector<float> to_f32(std::span<const double> xs) {
  std::vector<float> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = static_cast<float>(xs[i]);
  return out;
}

}  // namespace

std::vector<uint8_t> Message::encode() const {
  std::vector<uint8_t> out;
  out.reserve(13 + 4 * payload.size());
  put_u32(out, round);
  put_u32(out, node);
  out.push_back(static_cast<uint8_t>(kind));
  put_u32(out, static_cast<uint32_t>(payload.size()));
  for (float f : payload) put_u32(out, std::bit_cast<uint32_t>(f));
  return out;
}

Message Message::decode(std::span<const uint8_t> bytes) {
  if (bytes.size() < 13) throw std::invalid_argument("Message::decode: truncated header");
  Message m;
  m.round = get_u32(bytes, 0);
  m.node = get_u32(bytes, 4);
  uint8_t kind = bytes[8];
  if (kind > 2) throw std::invalid_argument("Message::decode: bad kind byte");
  m.kind = static_cast<MessageKind>(kind);
  uint32_t len = get_u32(bytes, 9);
  if (bytes.size() != 13 + 4 * static_cast<std::size_t>(len))
    throw std::invalid_argument("Message::decode: length mismatch");
  m.payload.resize(len);
  for (uint32_t i = 0; i < len; ++i)
    m.payload[i] = std::bit_cast<float>(get_u32(bytes, 13 + 4 * static_cast<std::size_t>(i)));
  return m;
}

std::size_t latent_dim_for(Model model, int hidden, int heads) {
  return model == Model::gcn ? static_cast<std::size_t>(hidden)
                             : static_cast<std::size_t>(hidden) * heads;
}

std::size_t user_params_for(Model model, std::size_t feature_dim, int hidden, int heads) {
  std::size_t w = feature_dim * static_cast<std::size_t>(hidden);
  return model == Model::gcn ? w : w * static_cast<std::size_t>(heads);
}

void fedavg_user_models(std::vector<ClientState>& clients, Model model, int threads) {
  if (clients.empty()) return;
  auto average = [&](auto tensor_of) {
    const DenseMatrix& first = tensor_of(clients.front());
    DenseMatrix mean(first.rows, first.cols);
    for (const ClientState& c : clients) {  // fixed node order
      const DenseMatrix& w = tensor_of(const_cast<ClientState&>(c));
      if (!w.same_shape(mean)) throw std::invalid_argument("fedavg: model shape mismatch");
      for (std::size_t k = 0; k < mean.data.size(); ++k) mean.data[k] += w.data[k];
    }
    double inv = 1.0 / static_cast<double>(clients.size());
    for (double& v : mean.data) v *= inv;
    parallel_for(clients.size(), threads, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) tensor_of(clients[i]).data = mean.data;
    });
  };
  if (model == Model::gcn) {
    average([](ClientState& c) -> DenseMatrix& { return c.gcn.w; });
  } else {
    std::size_t heads = clients.front().gat.heads.size();
    for (std::size_t l = 0; l < heads; ++l)
      average([l](ClientState& c) -> DenseMatrix& { return c.gat.heads[l]; });
  }
}

Simulation::Simulation(const Graph& g, const DenseMatrix& features, const RunConfig& cfg)
    : cfg_(cfg) {
  if (features.rows != g.n)
    throw std::invalid_argument("Simulation: one feature row per node required");
  require_finite(features, "Simulation: features");

  server_.adj = normalize(g);
  server_.nbrs = neighbor_sets(g);
  server_.labels = g.labels;
  server_.train_mask = g.train_mask;
  server_.test_mask = g.test_mask;
  server_.lambda = cfg.lambda;
  server_.drop_key = rng::chain(cfg.seed, "server.dropout");

  std::size_t hidden = static_cast<std::size_t>(cfg.hidden);
  std::size_t heads = static_cast<std::size_t>(cfg.heads);
  if (cfg.model == Model::gcn) {
    server_.gcn.w1 = glorot_uniform(hidden, g.num_classes, rng::chain(cfg.seed, "server.w1"));
    server_.opt.assign(1, AdamState(server_.gcn.w1.size()));
  } else {
    double attn1_limit = std::sqrt(6.0 / static_cast<double>(2 * hidden + 1));
    double attn2_limit = std::sqrt(6.0 / static_cast<double>(2 * g.num_classes + 1));
    server_.gat.attn1 = DenseMatrix(heads, 2 * hidden);
    uint64_t k1 = rng::chain(cfg.seed, "server.attn1");
    for (std::size_t k = 0; k < server_.gat.attn1.data.size(); ++k)
      server_.gat.attn1.data[k] = rng::uniform_sym(k1, k, attn1_limit);
    server_.gat.w2 =
        glorot_uniform(heads * hidden, g.num_classes, rng::chain(cfg.seed, "server.w2"));
    server_.gat.attn2 = DenseMatrix(1, 2 * g.num_classes);
    uint64_t k2 = rng::chain(cfg.seed, "server.attn2");
    for (std::size_t k = 0; k < server_.gat.attn2.data.size(); ++k)
      server_.gat.attn2.data[k] = rng::uniform_sym(k2, k, attn2_limit);
    server_.opt.assign(3, AdamState());
  }

  clients_.resize(g.n);
  parallel_for(g.n, cfg.threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      ClientState& c = clients_[i];
      c.id = static_cast<uint32_t>(i);
      auto row = features.row(i);
      c.features.assign(row.begin(), row.end());
      c.drop_key = rng::chain(rng::chain(cfg.seed, "client.dropout"), i);
      uint64_t wkey = rng::chain(rng::chain(cfg.seed, "client.w"), i);
      if (cfg.model == Model::gcn) {
        c.gcn.w = glorot_uniform(features.cols, hidden, wkey);
        c.opt.assign(1, AdamState());
      } else {
        c.gat.heads.reserve(heads);
        for (std::size_t l = 0; l < heads; ++l)
          c.gat.heads.push_back(glorot_uniform(features.cols, hidden, rng::chain(wkey, l)));
        c.opt.assign(heads, AdamState());
      }
    }
  });
}

std::size_t Simulation::latent_dim() const {
  return latent_dim_for(cfg_.model, cfg_.hidden, cfg_.heads);
}

std::size_t Simulation::params_per_user() const {
  return user_params_for(cfg_.model, clients_.empty() ? 0 : clients_.front().features.size(),
                         cfg_.hidden, cfg_.heads);
}

DenseMatrix Simulation::collect_latents(uint32_t round, bool training) {
  DenseMatrix latents(clients_.size(), latent_dim());
  parallel_for(clients_.size(), cfg_.threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      ClientState& c = clients_[i];
      ops::DropoutSpec spec{rng::chain(c.drop_key, round), 0, cfg_.dropout};
      std::vector<double> latent =
          cfg_.model == Model::gcn
              ? gcn_user_forward(c.gcn.w, c.features, spec, training)
              : gat_user_forward(c.gat, c.features, spec, training);
      std::copy(latent.begin(), latent.end(), latents.row(i).begin());
    }
  });
  return latents;
}

DenseMatrix Simulation::eval_probs() {
  DenseMatrix latents = collect_latents(0, false);
  if (cfg_.model == Model::gcn)
    return gcn_server_forward(server_.gcn, server_.adj, latents, {}, false, nullptr,
                              cfg_.threads)
        .probs;
  return gat_server_forward(server_.gat, server_.nbrs, latents, {}, false, nullptr, cfg_.threads)
      .probs;
}

RoundTranscript Simulation::run_round() {
  uint32_t t = server_.round + 1;
  std::size_t n = clients_.size();
  std::size_t h = latent_dim();
  AdamConfig opt{.lr = cfg_.lr, .weight_decay = cfg_.weight_decay};

  RoundTranscript tr;
  tr.round = t;

  // (a) clients compute and upload latents
  DenseMatrix latents = collect_latents(t, true);
  tr.latent_upload_bytes = static_cast<uint64_t>(n) * h * 4;
  if (cfg_.record_messages)
    for (std::size_t i = 0; i < n; ++i)
      messages_.push_back(
          {t, static_cast<uint32_t>(i), MessageKind::latent, to_f32(latents.row(i))});

  // (b) server forward, total loss, backward at the same forward point
  DenseMatrix grad_latents;
  double reg = laplacian_reg(latents, server_.nbrs, cfg_.model == Model::gat
                                                        ? static_cast<std::size_t>(cfg_.heads)
                                                        : 1);
  if (cfg_.model == Model::gcn) {
    ops::DropoutSpec hidden_drop{rng::chain(server_.drop_key, t), 0, cfg_.dropout};
    GcnServerContext ctx;
    GcnServerForward fwd = gcn_server_forward(server_.gcn, server_.adj, latents, hidden_drop,
                                              true, &ctx, cfg_.threads);
    auto ce = ops::masked_softmax_cross_entropy(fwd.logits, server_.labels, server_.train_mask);
    tr.train_ce = ce.loss;
    tr.train_reg = reg;
    tr.train_total = total_loss(ce.loss, reg, server_.lambda);
    check_divergence(tr.train_total, t);

    GcnServerGrads grads =
        gcn_server_backward(server_.gcn, server_.adj, ctx, ce.grad_logits, cfg_.threads);
    grad_latents = std::move(grads.latents);
    adam_step(server_.gcn.w1, grads.w1, server_.opt[0], opt);
  } else {
    uint64_t rkey = rng::chain(server_.drop_key, t);
    GatDropoutSpecs drops;
    for (int l = 0; l < cfg_.heads; ++l)
      drops.attn1.push_back({rng::chain(rng::chain(rkey, "attn1"), l), 0, cfg_.dropout});
    drops.feat = {rng::chain(rkey, "feat"), 0, cfg_.dropout};
    drops.attn2 = {rng::chain(rkey, "attn2"), 0, cfg_.dropout};
    GatServerContext ctx;
    GatServerForward fwd =
        gat_server_forward(server_.gat, server_.nbrs, latents, drops, true, &ctx, cfg_.threads);
    auto ce = ops::masked_softmax_cross_entropy(fwd.logits, server_.labels, server_.train_mask);
    tr.train_ce = ce.loss;
    tr.train_reg = reg;
    tr.train_total = total_loss(ce.loss, reg, server_.lambda);
    check_divergence(tr.train_total, t);

    GatServerGrads grads =
        gat_server_backward(server_.gat, server_.nbrs, ctx, ce.grad_logits, cfg_.threads);
    grad_latents = std::move(grads.latents);
    adam_step(server_.gat.attn1, grads.attn1, server_.opt[0], opt);
    adam_step(server_.gat.w2, grads.w2, server_.opt[1], opt);
    adam_step(server_.gat.attn2, grads.attn2, server_.opt[2], opt);
  }

  // (c) regularizer gradient joins the dispatched latent gradient
  if (server_.lambda != 0.0) {
    DenseMatrix rg = laplacian_reg_grad(
        latents, server_.nbrs,
        cfg_.model == Model::gat ? static_cast<std::size_t>(cfg_.heads) : 1, cfg_.threads);
    for (std::size_t k = 0; k < grad_latents.data.size(); ++k)
      grad_latents.data[k] += server_.lambda * rg.data[k];
  }
  tr.grad_download_bytes = static_cast<uint64_t>(n) * h * 4;
  if (cfg_.record_messages)
    for (std::size_t i = 0; i < n; ++i)
      messages_.push_back(
          {t, static_cast<uint32_t>(i), MessageKind::grad, to_f32(grad_latents.row(i))});

  // (d) clients backprop through their dropout masks and step
  parallel_for(n, cfg_.threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      ClientState& c = clients_[i];
      ops::DropoutSpec spec{rng::chain(c.drop_key, t), 0, cfg_.dropout};
      auto grow = grad_latents.row(i);
      if (cfg_.model == Model::gcn) {
        DenseMatrix gw = gcn_user_weight_grad(c.features, grow, spec, true,
                                              static_cast<std::size_t>(cfg_.hidden));
        adam_step(c.gcn.w, gw, c.opt[0], opt);
      } else {
        std::vector<DenseMatrix> gws = gat_user_weight_grads(
            c.features, grow, spec, true, static_cast<std::size_t>(cfg_.hidden),
            static_cast<std::size_t>(cfg_.heads));
        for (std::size_t l = 0; l < gws.size(); ++l)
          adam_step(c.gat.heads[l], gws[l], c.opt[l], opt);
      }
    }
  });

  // cnfgnn baseline: upload updated user models, average, broadcast
  if (cfg_.mode == Mode::cnfgnn) {
    std::size_t p = params_per_user();
    tr.param_upload_bytes = static_cast<uint64_t>(n) * p * 4;
    if (cfg_.record_messages)
      for (std::size_t i = 0; i < n; ++i) {
        const ClientState& c = clients_[i];
        std::vector<float> payload;
        payload.reserve(p);
        if (cfg_.model == Model::gcn) {
          for (double v : c.gcn.w.data) payload.push_back(static_cast<float>(v));
        } else {
          for (const DenseMatrix& w : c.gat.heads)
            for (double v : w.data) payload.push_back(static_cast<float>(v));
        }
        messages_.push_back({t, static_cast<uint32_t>(i), MessageKind::params,
                             std::move(payload)});
      }
    fedavg_user_models(clients_, cfg_.model, cfg_.threads);
    tr.param_download_bytes = static_cast<uint64_t>(n) * p * 4;
  }

  server_.round = t;
  tr.test_acc = masked_accuracy(eval_probs(), server_.labels, server_.test_mask);
  return tr;
}

std::vector<RoundTranscript> Simulation::train() {
  std::vector<RoundTranscript> transcripts;
  transcripts.reserve(cfg_.rounds);
  for (int t = 0; t < cfg_.rounds; ++t) transcripts.push_back(run_round());
  return transcripts;
}

CommReport comm_cost_report(const RunConfig& cfg, std::size_t n, std::size_t feature_dim,
                            const std::vector<RoundTranscript>* transcripts) {
  CommReport rep;
  rep.mode = to_string(cfg.mode);
  rep.model = to_string(cfg.model);
  rep.n = n;
  rep.latent_dim = latent_dim_for(cfg.model, cfg.hidden, cfg.heads);
  rep.params_per_user = user_params_for(cfg.model, feature_dim, cfg.hidden, cfg.heads);
  rep.rounds = cfg.rounds;

  const double mib = 1024.0 * 1024.0;
  uint64_t up = 0, down = 0;
  if (transcripts) {
    rep.rounds = static_cast<int>(transcripts->size());
    for (const RoundTranscript& tr : *transcripts) {
      up += tr.latent_upload_bytes + tr.param_upload_bytes;
      down += tr.grad_download_bytes + tr.param_download_bytes;
    }
  } else if (cfg.mode != Mode::centralized) {
    uint64_t latent = static_cast<uint64_t>(n) * rep.latent_dim * 4 * cfg.rounds;
    uint64_t params = cfg.mode == Mode::cnfgnn
                          ? static_cast<uint64_t>(n) * rep.params_per_user * 4 * cfg.rounds
                          : 0;
    up = latent + params;
    down = latent + params;  // gradients mirror latents; broadcast mirrors upload
  }
  rep.upload_mib = static_cast<double>(up) / mib;
  rep.download_mib = static_cast<double>(down) / mib;
  rep.table1_mib = rep.upload_mib;  // Table-1 convention: upload direction only
  return rep;
}

}  // namespace fedgraph
