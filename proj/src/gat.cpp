#include "fedgraph/gat.hpp"

#include <cmath>
#include <limits>

#include "fedgraph/adam.hpp"
#include "fedgraph/gcn.hpp"
#include "fedgraph/parallel.hpp"
#include "fedgraph/rng.hpp"

namespace fedgraph {

namespace {

constexpr double kAttnSlope = 0.2;

DenseMatrix col_block(const DenseMatrix& m, std::size_t block, std::size_t width) {
  DenseMatrix out(m.rows, width);
  for (std::size_t i = 0; i < m.rows; ++i)
    std::copy_n(m.data.data() + i * m.cols + block * width, width, out.data.data() + i * width);
  return out;
}

void set_col_block(DenseMatrix& dst, const DenseMatrix& src, std::size_t block) {
  for (std::size_t i = 0; i < src.rows; ++i)
    std::copy_n(src.data.data() + i * src.cols, src.cols,
                dst.data.data() + i * dst.cols + block * src.cols);
}

// Attention vectors map 2*width inputs to one coefficient.
DenseMatrix attn_vector_init(std::size_t rows, std::size_t width, uint64_t key) {
  DenseMatrix m(rows, width);
  double limit = std::sqrt(6.0 / static_cast<double>(width + 1));
  for (std::size_t k = 0; k < m.data.size(); ++k) m.data[k] = rng::uniform_sym(key, k, limit);
  return m;
}

struct AttnForward {
  std::vector<double> pre;    // per CSR slot, before leaky-relu
  std::vector<double> alpha;  // per slot, after row softmax (pre-dropout)
  DenseMatrix out;
};

// e_ij = leaky_relu(a_left.f_i + a_right.f_j) for j in N_i, softmax per row,
// dropout on the normalized coefficients, out_i = sum_j alpha~_ij f_j.
AttnForward attn_forward(const NeighborSets& nbrs, const DenseMatrix& feat,
                         std::span<const double> a_left, std::span<const double> a_right,
                         const ops::DropoutSpec& drop, bool training) {
  std::size_t n = nbrs.n(), f = feat.cols;
  AttnForward r;
  r.pre.resize(nbrs.total());
  r.alpha.resize(nbrs.total());
  r.out = DenseMatrix(n, f);

  std::vector<double> dot_l(n), dot_r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* fi = feat.data.data() + i * f;
    double dl = 0.0, dr = 0.0;
    for (std::size_t t = 0; t < f; ++t) {
      dl += a_left[t] * fi[t];
      dr += a_right[t] * fi[t];
    }
    dot_l[i] = dl;
    dot_r[i] = dr;
  }

  bool do_drop = training && drop.rate > 0.0;
  double keep_scale = do_drop ? 1.0 / (1.0 - drop.rate) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    uint32_t k0 = nbrs.offsets[i], k1 = nbrs.offsets[i + 1];
    double mx = -std::numeric_limits<double>::infinity();
    for (uint32_t k = k0; k < k1; ++k) {
      double pre = dot_l[i] + dot_r[nbrs.nbrs[k]];
      r.pre[k] = pre;
      mx = std::max(mx, pre > 0.0 ? pre : kAttnSlope * pre);
    }
    double z = 0.0;
    for (uint32_t k = k0; k < k1; ++k) {
      double e = r.pre[k] > 0.0 ? r.pre[k] : kAttnSlope * r.pre[k];
      r.alpha[k] = std::exp(e - mx);
      z += r.alpha[k];
    }
    double* orow = r.out.data.data() + i * f;
    for (uint32_t k = k0; k < k1; ++k) {
      r.alpha[k] /= z;
      double a = r.alpha[k];
      if (do_drop) a = drop.keeps(k) ? a * keep_scale : 0.0;
      if (a == 0.0) continue;
      const double* fj = feat.data.data() + static_cast<std::size_t>(nbrs.nbrs[k]) * f;
      for (std::size_t t = 0; t < f; ++t) orow[t] += a * fj[t];
    }
  }
  return r;
}

struct AttnGrads {
  std::vector<double> a_left, a_right;
  DenseMatrix feat;
};

AttnGrads attn_backward(const NeighborSets& nbrs, const DenseMatrix& feat,
                        const AttnForward& saved, std::span<const double> a_left,
                        std::span<const double> a_right, const ops::DropoutSpec& drop,
                        bool training, const DenseMatrix& grad_out) {
  std::size_t n = nbrs.n(), f = feat.cols;
  AttnGrads g;
  g.a_left.assign(f, 0.0);
  g.a_right.assign(f, 0.0);
  g.feat = DenseMatrix(n, f);

  bool do_drop = training && drop.rate > 0.0;
  double keep_scale = do_drop ? 1.0 / (1.0 - drop.rate) : 1.0;

  std::vector<double> grad_pre(nbrs.total());
  std::vector<double> grad_dl(n, 0.0), grad_dr(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    uint32_t k0 = nbrs.offsets[i], k1 = nbrs.offsets[i + 1];
    const double* grow = grad_out.data.data() + i * f;
    // through the aggregation: grad alpha~ and the feature-side term
    double srow = 0.0;  // sum_k alpha_k * grad_alpha_k for the softmax adjoint
    for (uint32_t k = k0; k < k1; ++k) {
      std::size_t j = nbrs.nbrs[k];
      const double* fj = feat.data.data() + j * f;
      double ga_bar = 0.0;
      for (std::size_t t = 0; t < f; ++t) ga_bar += grow[t] * fj[t];
      double adropped = saved.alpha[k];
      double ga = ga_bar;
      if (do_drop) {
        if (drop.keeps(k)) {
          adropped *= keep_scale;
          ga *= keep_scale;
        } else {
          adropped = 0.0;
          ga = 0.0;
        }
      }
      if (adropped != 0.0) {
        double* gfj = g.feat.data.data() + j * f;
        for (std::size_t t = 0; t < f; ++t) gfj[t] += adropped * grow[t];
      }
      grad_pre[k] = ga;  // holds grad_alpha until the softmax adjoint below
      srow += saved.alpha[k] * ga;
    }
    for (uint32_t k = k0; k < k1; ++k) {
      double ge = saved.alpha[k] * (grad_pre[k] - srow);
      double gp = saved.pre[k] > 0.0 ? ge : kAttnSlope * ge;
      grad_pre[k] = gp;
      grad_dl[i] += gp;
      grad_dr[nbrs.nbrs[k]] += gp;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* fi = feat.data.data() + i * f;
    double* gfi = g.feat.data.data() + i * f;
    for (std::size_t t = 0; t < f; ++t) {
      g.a_left[t] += grad_dl[i] * fi[t];
      g.a_right[t] += grad_dr[i] * fi[t];
      gfi[t] += grad_dl[i] * a_left[t] + grad_dr[i] * a_right[t];
    }
  }
  return g;
}

}  // namespace

std::vector<double> gat_user_forward(const GatUserModel& m, std::span<const double> x,
                                     const ops::DropoutSpec& input_drop, bool training) {
  if (m.heads.empty()) throw std::invalid_argument("gat_user_forward: no heads");
  std::size_t hidden = m.heads.front().cols;
  std::vector<double> latent(m.heads.size() * hidden, 0.0);
  bool drop = training && input_drop.rate > 0.0;
  double scale = drop ? 1.0 / (1.0 - input_drop.rate) : 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double xv = x[k];
    if (xv == 0.0) continue;
    if (drop && !input_drop.keeps(k)) continue;  // one mask shared by all heads
    xv *= scale;
    for (std::size_t l = 0; l < m.heads.size(); ++l) {
      const DenseMatrix& w = m.heads[l];
      if (w.rows != x.size() || w.cols != hidden)
        throw std::invalid_argument("gat_user_forward: head shape mismatch");
      const double* wrow = w.data.data() + k * hidden;
      double* out = latent.data() + l * hidden;
      for (std::size_t j = 0; j < hidden; ++j) out[j] += xv * wrow[j];
    }
  }
  return latent;
}

std::vector<DenseMatrix> gat_user_weight_grads(std::span<const double> x,
                                               std::span<const double> grad_latent,
                                               const ops::DropoutSpec& input_drop, bool training,
                                               std::size_t hidden, std::size_t heads) {
  if (grad_latent.size() != hidden * heads)
    throw std::invalid_argument("gat_user_weight_grads: bad gradient size");
  std::vector<DenseMatrix> grads(heads, DenseMatrix(x.size(), hidden));
  bool drop = training && input_drop.rate > 0.0;
  double scale = drop ? 1.0 / (1.0 - input_drop.rate) : 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double xv = x[k];
    if (xv == 0.0) continue;
    if (drop && !input_drop.keeps(k)) continue;
    xv *= scale;
    for (std::size_t l = 0; l < heads; ++l) {
      const double* g = grad_latent.data() + l * hidden;
      double* grow = grads[l].data.data() + k * hidden;
      for (std::size_t j = 0; j < hidden; ++j) grow[j] = xv * g[j];
    }
  }
  return grads;
}

GatServerForward gat_server_forward(const GatServerModel& model, const NeighborSets& nbrs,
                                    const DenseMatrix& latents, const GatDropoutSpecs& drops,
                                    bool training, GatServerContext* ctx, int threads) {
  std::size_t heads = model.heads(), hidden = model.hidden();
  if (latents.cols != heads * hidden)
    throw std::invalid_argument("gat_server_forward: latent width mismatch");
  if (latents.rows != nbrs.n())
    throw std::invalid_argument("gat_server_forward: missing latent rows");
  if (training && drops.attn1.size() != heads)
    throw std::invalid_argument("gat_server_forward: need one attn dropout spec per head");

  std::vector<AttnForward> head_fwd(heads);
  std::vector<DenseMatrix> head_out(heads);
  parallel_for(heads, threads, [&](std::size_t l0, std::size_t l1) {
    for (std::size_t l = l0; l < l1; ++l) {
      DenseMatrix block = col_block(latents, l, hidden);
      auto arow = model.attn1.row(l);
      ops::DropoutSpec drop = drops.attn1.empty() ? ops::DropoutSpec{} : drops.attn1[l];
      head_fwd[l] = attn_forward(nbrs, block, arow.subspan(0, hidden), arow.subspan(hidden),
                                 drop, training);
      head_out[l] = ops::elu(head_fwd[l].out);
    }
  });

  DenseMatrix h(latents.rows, heads * hidden);
  for (std::size_t l = 0; l < heads; ++l) set_col_block(h, head_out[l], l);
  DenseMatrix hd = ops::dropout(h, drops.feat, training, threads);
  DenseMatrix u = ops::matmul(hd, model.w2, threads);

  auto brow = model.attn2.row(0);
  std::size_t c = model.w2.cols;
  AttnForward layer2 = attn_forward(nbrs, u, brow.subspan(0, c), brow.subspan(c),
                                    drops.attn2, training);

  GatServerForward out;
  out.logits = layer2.out;
  out.probs = ops::row_softmax(out.logits);

  if (ctx) {
    ctx->latents = latents;
    ctx->head_attn.resize(heads);
    ctx->s_pre_elu.resize(heads);
    for (std::size_t l = 0; l < heads; ++l) {
      ctx->head_attn[l] = {std::move(head_fwd[l].pre), std::move(head_fwd[l].alpha),
                           drops.attn1.empty() ? ops::DropoutSpec{} : drops.attn1[l]};
      ctx->s_pre_elu[l] = std::move(head_fwd[l].out);
    }
    ctx->h_dropped = std::move(hd);
    ctx->feat_drop = drops.feat;
    ctx->u = std::move(u);
    ctx->attn2 = {std::move(layer2.pre), std::move(layer2.alpha), drops.attn2};
    ctx->training = training;
  }
  return out;
}

GatServerGrads gat_server_backward(const GatServerModel& model, const NeighborSets& nbrs,
                                   const GatServerContext& ctx, const DenseMatrix& grad_logits,
                                   int threads) {
  if (ctx.u.rows == 0) throw std::invalid_argument("gat_server_backward: missing forward context");
  std::size_t heads = model.heads(), hidden = model.hidden(), c = model.w2.cols;

  AttnForward saved2{ctx.attn2.pre, ctx.attn2.alpha, {}};
  auto brow = model.attn2.row(0);
  AttnGrads g2 = attn_backward(nbrs, ctx.u, saved2, brow.subspan(0, c), brow.subspan(c),
                               ctx.attn2.drop, ctx.training, grad_logits);

  GatServerGrads grads;
  grads.attn2 = DenseMatrix(1, 2 * c);
  std::copy(g2.a_left.begin(), g2.a_left.end(), grads.attn2.data.begin());
  std::copy(g2.a_right.begin(), g2.a_right.end(), grads.attn2.data.begin() + c);

  grads.w2 = ops::matmul_transpose_a(ctx.h_dropped, g2.feat, threads);
  DenseMatrix grad_hd = ops::matmul_transpose_b(g2.feat, model.w2, threads);
  DenseMatrix grad_h = ops::dropout_backward(grad_hd, ctx.feat_drop, ctx.training, threads);

  grads.attn1 = DenseMatrix(heads, 2 * hidden);
  grads.latents = DenseMatrix(ctx.latents.rows, heads * hidden);
  std::vector<DenseMatrix> latent_grads(heads);
  parallel_for(heads, threads, [&](std::size_t l0, std::size_t l1) {
    for (std::size_t l = l0; l < l1; ++l) {
      DenseMatrix grad_s =
          ops::elu_backward(ctx.s_pre_elu[l], col_block(grad_h, l, hidden));
      DenseMatrix block = col_block(ctx.latents, l, hidden);
      AttnForward saved1{ctx.head_attn[l].pre, ctx.head_attn[l].alpha, {}};
      auto arow = model.attn1.row(l);
      AttnGrads g1 = attn_backward(nbrs, block, saved1, arow.subspan(0, hidden),
                                   arow.subspan(hidden), ctx.head_attn[l].drop, ctx.training,
                                   grad_s);
      std::copy(g1.a_left.begin(), g1.a_left.end(),
                grads.attn1.data.begin() + l * 2 * hidden);
      std::copy(g1.a_right.begin(), g1.a_right.end(),
                grads.attn1.data.begin() + l * 2 * hidden + hidden);
      latent_grads[l] = std::move(g1.feat);
    }
  });
  for (std::size_t l = 0; l < heads; ++l) set_col_block(grads.latents, latent_grads[l], l);
  return grads;
}

DenseMatrix centralized_gat_forward(const NeighborSets& nbrs, const DenseMatrix& features,
                                    const std::vector<DenseMatrix>& head_ws,
                                    const GatServerModel& model, int threads) {
  std::size_t hidden = model.hidden();
  DenseMatrix latents(features.rows, head_ws.size() * hidden);
  for (std::size_t l = 0; l < head_ws.size(); ++l)
    set_col_block(latents, ops::matmul(features, head_ws[l], threads), l);
  return gat_server_forward(model, nbrs, latents, {}, false, nullptr, threads).probs;
}

std::vector<RoundTranscript> train_centralized_gat(const Graph& g, const DenseMatrix& features,
                                                   const RunConfig& cfg) {
  NeighborSets nbrs = neighbor_sets(g);
  std::size_t heads = static_cast<std::size_t>(cfg.heads);
  std::size_t hidden = static_cast<std::size_t>(cfg.hidden);

  std::vector<DenseMatrix> head_ws;
  for (std::size_t l = 0; l < heads; ++l)
    head_ws.push_back(
        glorot_uniform(features.cols, hidden, rng::chain(rng::chain(cfg.seed, "central.gat.w"), l)));
  GatServerModel model;
  model.attn1 = attn_vector_init(heads, 2 * hidden, rng::chain(cfg.seed, "central.gat.attn1"));
  model.w2 = glorot_uniform(heads * hidden, g.num_classes, rng::chain(cfg.seed, "central.gat.w2"));
  model.attn2 = attn_vector_init(1, 2 * g.num_classes, rng::chain(cfg.seed, "central.gat.attn2"));

  AdamConfig opt{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  std::vector<AdamState> st_heads(heads);
  AdamState st_attn1(model.attn1.size()), st_w2(model.w2.size()), st_attn2(model.attn2.size());

  uint64_t drop_root = rng::chain(cfg.seed, "central.gat.dropout");
  std::vector<RoundTranscript> transcripts;
  for (int t = 1; t <= cfg.rounds; ++t) {
    uint64_t rkey = rng::chain(drop_root, static_cast<uint64_t>(t));
    ops::DropoutSpec in_drop{rng::chain(rkey, "in"), 0, cfg.dropout};
    GatDropoutSpecs drops;
    for (std::size_t l = 0; l < heads; ++l)
      drops.attn1.push_back({rng::chain(rng::chain(rkey, "attn1"), l), 0, cfg.dropout});
    drops.feat = {rng::chain(rkey, "feat"), 0, cfg.dropout};
    drops.attn2 = {rng::chain(rkey, "attn2"), 0, cfg.dropout};

    DenseMatrix xd = ops::dropout(features, in_drop, true, cfg.threads);
    DenseMatrix latents(features.rows, heads * hidden);
    for (std::size_t l = 0; l < heads; ++l)
      set_col_block(latents, ops::matmul(xd, head_ws[l], cfg.threads), l);

    GatServerContext ctx;
    GatServerForward fwd =
        gat_server_forward(model, nbrs, latents, drops, true, &ctx, cfg.threads);
    auto ce = ops::masked_softmax_cross_entropy(fwd.logits, g.labels, g.train_mask);
    check_divergence(ce.loss, static_cast<uint32_t>(t));

    GatServerGrads sg = gat_server_backward(model, nbrs, ctx, ce.grad_logits, cfg.threads);
    for (std::size_t l = 0; l < heads; ++l) {
      DenseMatrix gw =
          ops::matmul_transpose_a(xd, col_block(sg.latents, l, hidden), cfg.threads);
      adam_step(head_ws[l], gw, st_heads[l], opt);
    }
    adam_step(model.attn1, sg.attn1, st_attn1, opt);
    adam_step(model.w2, sg.w2, st_w2, opt);
    adam_step(model.attn2, sg.attn2, st_attn2, opt);

    DenseMatrix probs = centralized_gat_forward(nbrs, features, head_ws, model, cfg.threads);
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
