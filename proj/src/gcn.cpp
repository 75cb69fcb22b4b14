#include "fedgraph/gcn.hpp"

#include <cmath>

#include "fedgraph/adam.hpp"
#include "fedgraph/rng.hpp"

namespace fedgraph {

DenseMatrix glorot_uniform(std::size_t rows, std::size_t cols, uint64_t key) {
  DenseMatrix m(rows, cols);
  double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (std::size_t k = 0; k < m.data.size(); ++k)
    m.data[k] = rng::uniform_sym(key, k, limit);
  return m;
}

std::vector<double> gcn_user_forward(const DenseMatrix& w, std::span<const double> x,
                                     const ops::DropoutSpec& input_drop, bool training) {
  if (x.size() != w.rows) throw std::invalid_argument("gcn_user_forward: dimension mismatch");
  std::vector<double> latent(w.cols, 0.0);
  bool drop = training && input_drop.rate > 0.0;
  double scale = drop ? 1.0 / (1.0 - input_drop.rate) : 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double xv = x[k];
    if (xv == 0.0) continue;
    if (drop && !input_drop.keeps(k)) continue;
    xv *= scale;
    const double* wrow = w.data.data() + k * w.cols;
    for (std::size_t j = 0; j < w.cols; ++j) latent[j] += xv * wrow[j];
  }
  return latent;
}

DenseMatrix gcn_user_weight_grad(std::span<const double> x, std::span<const double> g,
                                 const ops::DropoutSpec& input_drop, bool training,
                                 std::size_t hidden) {
  if (g.size() != hidden) throw std::invalid_argument("gcn_user_weight_grad: bad gradient size");
  DenseMatrix grad(x.size(), hidden);
  bool drop = training && input_drop.rate > 0.0;
  double scale = drop ? 1.0 / (1.0 - input_drop.rate) : 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double xv = x[k];
    if (xv == 0.0) continue;
    if (drop && !input_drop.keeps(k)) continue;
    xv *= scale;
    double* grow = grad.data.data() + k * hidden;
    for (std::size_t j = 0; j < hidden; ++j) grow[j] = xv * g[j];
  }
  return grad;
}

GcnServerForward gcn_server_forward(const GcnServerModel& model, const NormalizedAdjacency& adj,
                                    const DenseMatrix& latents,
                                    const ops::DropoutSpec& hidden_drop, bool training,
                                    GcnServerContext* ctx, int threads) {
  if (latents.cols != model.w1.rows)
    throw std::invalid_argument("gcn_server_forward: latent width does not match W1");
  DenseMatrix h1 = ops::spmm(adj, latents, threads);
  DenseMatrix hd = ops::dropout(ops::relu(h1), hidden_drop, training, threads);
  DenseMatrix agg = ops::spmm(adj, hd, threads);
  GcnServerForward out;
  out.logits = ops::matmul(agg, model.w1, threads);
  out.probs = ops::row_softmax(out.logits);
  if (ctx) {
    ctx->h1 = std::move(h1);
    ctx->agg_h = std::move(agg);
    ctx->hidden_drop = hidden_drop;
    ctx->training = training;
  }
  return out;
}

GcnServerGrads gcn_server_backward(const GcnServerModel& model, const NormalizedAdjacency& adj,
                                   const GcnServerContext& ctx, const DenseMatrix& grad_logits,
                                   int threads) {
  GcnServerGrads grads;
  grads.w1 = ops::matmul_transpose_a(ctx.agg_h, grad_logits, threads);
  DenseMatrix g_hd = ops::spmm_backward(
      adj, ops::matmul_transpose_b(grad_logits, model.w1, threads), threads);
  DenseMatrix g_relu = ops::dropout_backward(g_hd, ctx.hidden_drop, ctx.training, threads);
  grads.latents =
      ops::spmm_backward(adj, ops::relu_backward(ctx.h1, g_relu), threads);
  return grads;
}

DenseMatrix centralized_gcn_forward(const NormalizedAdjacency& adj, const DenseMatrix& features,
                                    const DenseMatrix& w0, const DenseMatrix& w1, int threads) {
  GcnServerModel server{w1};
  DenseMatrix latents = ops::matmul(features, w0, threads);
  return gcn_server_forward(server, adj, latents, {}, false, nullptr, threads).probs;
}

std::vector<RoundTranscript> train_centralized_gcn(const Graph& g, const DenseMatrix& features,
                                                   const RunConfig& cfg) {
  require_shape(features, g.n, g.feature_dim ? g.feature_dim : features.cols,
                "train_centralized_gcn: features");
  NormalizedAdjacency adj = normalize(g);
  std::size_t hidden = static_cast<std::size_t>(cfg.hidden);

  DenseMatrix w0 = glorot_uniform(features.cols, hidden, rng::chain(cfg.seed, "central.w0"));
  GcnServerModel server{glorot_uniform(hidden, g.num_classes, rng::chain(cfg.seed, "central.w1"))};
  AdamState st_w0(w0.size()), st_w1(server.w1.size());
  AdamConfig opt{.lr = cfg.lr, .weight_decay = cfg.weight_decay};

  std::vector<RoundTranscript> transcripts;
  transcripts.reserve(cfg.rounds);
  uint64_t drop_root = rng::chain(cfg.seed, "central.dropout");
  for (int t = 1; t <= cfg.rounds; ++t) {
    ops::DropoutSpec in_drop{rng::chain(drop_root, 2 * static_cast<uint64_t>(t)), 0, cfg.dropout};
    ops::DropoutSpec hid_drop{rng::chain(drop_root, 2 * static_cast<uint64_t>(t) + 1), 0,
                              cfg.dropout};
    DenseMatrix xd = ops::dropout(features, in_drop, true, cfg.threads);
    DenseMatrix latents = ops::matmul(xd, w0, cfg.threads);
    GcnServerContext ctx;
    GcnServerForward fwd =
        gcn_server_forward(server, adj, latents, hid_drop, true, &ctx, cfg.threads);
    auto ce = ops::masked_softmax_cross_entropy(fwd.logits, g.labels, g.train_mask);
    check_divergence(ce.loss, static_cast<uint32_t>(t));

    GcnServerGrads sg = gcn_server_backward(server, adj, ctx, ce.grad_logits, cfg.threads);
    DenseMatrix grad_w0 = ops::matmul_transpose_a(xd, sg.latents, cfg.threads);
    adam_step(w0, grad_w0, st_w0, opt);
    adam_step(server.w1, sg.w1, st_w1, opt);

    DenseMatrix probs = centralized_gcn_forward(adj, features, w0, server.w1, cfg.threads);
    RoundTranscript tr;
    tr.round = static_cast<uint32_t>(t);
    tr.train_ce = ce.loss;
    tr.train_total = ce.loss;
    tr.test_acc = masked_accuracy(probs, g.labels, g.test_mask);
    transcripts.push_back(tr);
  }
  return transcripts;
}

}  // namespace fedgraph
