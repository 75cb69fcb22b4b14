#include "fedgraph/laplacian.hpp"

#include <stdexcept>

#include "fedgraph/parallel.hpp"

namespace fedgraph {

double laplacian_reg(const DenseMatrix& latents, const NeighborSets& nbrs, std::size_t heads) {
  if (latents.rows != nbrs.n())
    throw std::invalid_argument("laplacian_reg: latent rows do not match neighbor sets");
  double acc = 0.0;
  for (std::size_t i = 0; i < latents.rows; ++i) {
    const double* xi = latents.data.data() + i * latents.cols;
    for (uint32_t j : nbrs.of(i)) {
      if (j == i) continue;  // zero term, still counted in the denominator
      const double* xj = latents.data.data() + static_cast<std::size_t>(j) * latents.cols;
      double s = 0.0;
      for (std::size_t k = 0; k < latents.cols; ++k) {
        double d = xi[k] - xj[k];
        s += d * d;
      }
      acc += s;
    }
  }
  return acc / (static_cast<double>(nbrs.total()) * static_cast<double>(heads));
}

DenseMatrix laplacian_reg_grad(const DenseMatrix& latents, const NeighborSets& nbrs,
                               std::size_t heads, int threads) {
  if (latents.rows != nbrs.n())
    throw std::invalid_argument("laplacian_reg_grad: latent rows do not match neighbor sets");
  DenseMatrix grad(latents.rows, latents.cols);
  double scale = 4.0 / (static_cast<double>(nbrs.total()) * static_cast<double>(heads));
  parallel_for(latents.rows, threads, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const double* xi = latents.data.data() + i * latents.cols;
      double* gi = grad.data.data() + i * latents.cols;
      for (uint32_t j : nbrs.of(i)) {
        if (j == i) continue;
        const double* xj = latents.data.data() + static_cast<std::size_t>(j) * latents.cols;
        for (std::size_t k = 0; k < latents.cols; ++k) gi[k] += scale * (xi[k] - xj[k]);
      }
    }
  });
  return grad;
}

}  // namespace fedgraph
