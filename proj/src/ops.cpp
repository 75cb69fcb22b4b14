#include "fedgraph/ops.hpp"

#include <cmath>
#include <mutex>

#include "fedgraph/parallel.hpp"
#include "fedgraph/rng.hpp"

namespace fedgraph::ops {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, int threads) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix out(a.rows, b.cols);
  parallel_for(a.rows, threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const double* arow = a.data.data() + i * a.cols;
      double* orow = out.data.data() + i * out.cols;
      for (std::size_t k = 0; k < a.cols; ++k) {
        double av = arow[k];
        if (av == 0.0) continue;  // feature rows are sparse; exact skip
        const double* brow = b.data.data() + k * b.cols;
        for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
      }
    }
  });
  return out;
}

DenseMatrix matmul_transpose_a(const DenseMatrix& a, const DenseMatrix& b, int threads) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_transpose_a: dimension mismatch");
  DenseMatrix out(a.cols, b.cols);
  // fixed row blocks with partials reduced in block order: the accumulation
  // order is a function of the shapes alone, never of the thread count
  constexpr std::size_t kBlock = 256;
  std::size_t nblocks = (a.rows + kBlock - 1) / kBlock;
  if (nblocks <= 1) {
    for (std::size_t i = 0; i < a.rows; ++i) {
      const double* arow = a.data.data() + i * a.cols;
      const double* brow = b.data.data() + i * b.cols;
      for (std::size_t k = 0; k < a.cols; ++k) {
        double av = arow[k];
        if (av == 0.0) continue;
        double* orow = out.data.data() + k * out.cols;
        for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
      }
    }
    return out;
  }
  std::vector<DenseMatrix> partial(nblocks);
  parallel_for(nblocks, threads, [&](std::size_t c0, std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) {
      DenseMatrix acc(a.cols, b.cols);
      std::size_t i1 = std::min(a.rows, (c + 1) * kBlock);
      for (std::size_t i = c * kBlock; i < i1; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        const double* brow = b.data.data() + i * b.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
          double av = arow[k];
          if (av == 0.0) continue;
          double* orow = acc.data.data() + k * acc.cols;
          for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
      }
      partial[c] = std::move(acc);
    }
  });
  for (const auto& p : partial)
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += p.data[k];
  return out;
}

DenseMatrix matmul_transpose_b(const DenseMatrix& a, const DenseMatrix& b, int threads) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_transpose_b: dimension mismatch");
  DenseMatrix out(a.rows, b.rows);
  parallel_for(a.rows, threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const double* arow = a.data.data() + i * a.cols;
      double* orow = out.data.data() + i * out.cols;
      for (std::size_t j = 0; j < b.rows; ++j) {
        const double* brow = b.data.data() + j * b.cols;
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) s += arow[k] * brow[k];
        orow[j] = s;
      }
    }
  });
  return out;
}

void matmul_backward(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& grad_out,
                     DenseMatrix* grad_a, DenseMatrix* grad_b, int threads) {
  require_shape(grad_out, a.rows, b.cols, "matmul_backward");
  if (grad_a) *grad_a = matmul_transpose_b(grad_out, b, threads);
  if (grad_b) *grad_b = matmul_transpose_a(a, grad_out, threads);
}

DenseMatrix spmm(const NormalizedAdjacency& adj, const DenseMatrix& x, int threads) {
  if (x.rows != adj.n) throw std::invalid_argument("spmm: dimension mismatch");
  DenseMatrix out(adj.n, x.cols);
  parallel_for(adj.n, threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      double* orow = out.data.data() + i * out.cols;
      for (uint32_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
        double w = adj.val[k];
        const double* xrow = x.data.data() + static_cast<std::size_t>(adj.col[k]) * x.cols;
        for (std::size_t j = 0; j < x.cols; ++j) orow[j] += w * xrow[j];
      }
    }
  });
  return out;
}

DenseMatrix spmm_backward(const NormalizedAdjacency& adj, const DenseMatrix& grad_out,
                          int threads) {
  return spmm(adj, grad_out, threads);
}

DenseMatrix relu(const DenseMatrix& x) {
  DenseMatrix out(x.rows, x.cols);
  for (std::size_t k = 0; k < x.data.size(); ++k) out.data[k] = x.data[k] > 0.0 ? x.data[k] : 0.0;
  return out;
}

DenseMatrix relu_backward(const DenseMatrix& x, const DenseMatrix& grad_out) {
  if (!x.same_shape(grad_out)) throw std::invalid_argument("relu_backward: shape mismatch");
  DenseMatrix out(x.rows, x.cols);
  for (std::size_t k = 0; k < x.data.size(); ++k)
    out.data[k] = x.data[k] > 0.0 ? grad_out.data[k] : 0.0;
  return out;
}

DenseMatrix leaky_relu(const DenseMatrix& x, double slope) {
  DenseMatrix out(x.rows, x.cols);
  for (std::size_t k = 0; k < x.data.size(); ++k)
    out.data[k] = x.data[k] > 0.0 ? x.data[k] : slope * x.data[k];
  return out;
}

DenseMatrix leaky_relu_backward(const DenseMatrix& x, const DenseMatrix& grad_out, double slope) {
  if (!x.same_shape(grad_out)) throw std::invalid_argument("leaky_relu_backward: shape mismatch");
  DenseMatrix out(x.rows, x.cols);
  for (std::size_t k = 0; k < x.data.size(); ++k)
    out.data[k] = x.data[k] > 0.0 ? grad_out.data[k] : slope * grad_out.data[k];
  return out;
}

DenseMatrix elu(const DenseMatrix& x) {
  DenseMatrix out(x.rows, x.cols);
  for (std::size_t k = 0; k < x.data.size(); ++k)
    out.data[k] = x.data[k] > 0.0 ? x.data[k] : std::expm1(x.data[k]);
  return out;
}

DenseMatrix elu_backward(const DenseMatrix& x, const DenseMatrix& grad_out) {
  if (!x.same_shape(grad_out)) throw std::invalid_argument("elu_backward: shape mismatch");
  DenseMatrix out(x.rows, x.cols);
  for (std::size_t k = 0; k < x.data.size(); ++k)
    out.data[k] = x.data[k] > 0.0 ? grad_out.data[k] : std::exp(x.data[k]) * grad_out.data[k];
  return out;
}

DenseMatrix concat_cols(const std::vector<const DenseMatrix*>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("concat_cols: no blocks");
  std::size_t rows = blocks.front()->rows, cols = 0;
  for (const auto* b : blocks) {
    if (b->rows != rows) throw std::invalid_argument("concat_cols: row count mismatch");
    cols += b->cols;
  }
  DenseMatrix out(rows, cols);
  std::size_t at = 0;
  for (const auto* b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      std::copy_n(b->data.data() + i * b->cols, b->cols, out.data.data() + i * cols + at);
    at += b->cols;
  }
  return out;
}

std::vector<DenseMatrix> concat_cols_backward(const DenseMatrix& grad_out,
                                              const std::vector<std::size_t>& widths) {
  std::size_t total = 0;
  for (std::size_t w : widths) total += w;
  if (total != grad_out.cols) throw std::invalid_argument("concat_cols_backward: width mismatch");
  std::vector<DenseMatrix> grads;
  grads.reserve(widths.size());
  std::size_t at = 0;
  for (std::size_t w : widths) {
    DenseMatrix g(grad_out.rows, w);
    for (std::size_t i = 0; i < grad_out.rows; ++i)
      std::copy_n(grad_out.data.data() + i * grad_out.cols + at, w, g.data.data() + i * w);
    grads.push_back(std::move(g));
    at += w;
  }
  return grads;
}

bool DropoutSpec::keeps(std::size_t k) const { return rng::uniform(key, counter0 + k) >= rate; }

DenseMatrix dropout(const DenseMatrix& x, const DropoutSpec& spec, bool training, int threads) {
  if (spec.rate < 0.0 || spec.rate >= 1.0)
    throw std::invalid_argument("dropout: rate must be in [0,1)");
  if (!training || spec.rate == 0.0) return x;
  DenseMatrix out(x.rows, x.cols);
  double scale = 1.0 / (1.0 - spec.rate);
  parallel_for(x.rows, threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t k = i0 * x.cols; k < i1 * x.cols; ++k)
      out.data[k] = spec.keeps(k) ? x.data[k] * scale : 0.0;
  });
  return out;
}

DenseMatrix dropout_backward(const DenseMatrix& grad_out, const DropoutSpec& spec, bool training,
                             int threads) {
  return dropout(grad_out, spec, training, threads);
}

DenseMatrix row_softmax(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows, logits.cols);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    auto row = logits.row(i);
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double z = 0.0;
    for (std::size_t j = 0; j < logits.cols; ++j) {
      double e = std::exp(row[j] - mx);
      out(i, j) = e;
      z += e;
    }
    for (std::size_t j = 0; j < logits.cols; ++j) out(i, j) /= z;
  }
  return out;
}

CrossEntropyResult masked_softmax_cross_entropy(const DenseMatrix& logits,
                                                std::span<const int32_t> labels,
                                                std::span<const uint32_t> mask) {
  if (labels.size() != logits.rows)
    throw std::invalid_argument("cross_entropy: one label per logit row required");
  CrossEntropyResult res;
  res.grad_logits = DenseMatrix(logits.rows, logits.cols);
  for (uint32_t i : mask) {
    if (i >= logits.rows) throw std::invalid_argument("cross_entropy: mask row out of range");
    int32_t y = labels[i];
    if (y < 0) throw std::invalid_argument("cross_entropy: mask row " + std::to_string(i) +
                                           " has no label");
    auto row = logits.row(i);
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : row) z += std::exp(v - mx);
    double logz = std::log(z) + mx;
    res.loss += logz - row[static_cast<std::size_t>(y)];
    for (std::size_t j = 0; j < logits.cols; ++j)
      res.grad_logits(i, j) = std::exp(row[j] - logz);
    res.grad_logits(i, static_cast<std::size_t>(y)) -= 1.0;
  }
  if (!std::isfinite(res.loss))
    throw std::runtime_error("cross_entropy: non-finite loss");
  return res;
}

}  // namespace fedgraph::ops
