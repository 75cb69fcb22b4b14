#include "fedgraph/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedgraph/rng.hpp"

namespace fedgraph {

double finite_diff_max_rel_err(const DiffFunction& f, std::vector<DenseMatrix> at,
                               std::size_t max_coords, double step, uint64_t sample_key) {
  std::vector<DenseMatrix> analytic = f.gradient(at);
  if (analytic.size() != at.size())
    throw std::invalid_argument("finite_diff: gradient count mismatch");

  double max_err = 0.0;
  for (std::size_t t = 0; t < at.size(); ++t) {
    if (!analytic[t].same_shape(at[t]))
      throw std::invalid_argument("finite_diff: gradient shape mismatch");
    std::size_t total = at[t].size();
    std::vector<std::size_t> coords;
    if (total <= max_coords) {
      coords.resize(total);
      for (std::size_t k = 0; k < total; ++k) coords[k] = k;
    } else {
      uint64_t key = rng::chain(sample_key, t);
      for (std::size_t s = 0; s < max_coords; ++s)
        coords.push_back(rng::bits(key, s) % total);
      std::sort(coords.begin(), coords.end());
      coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    }
    for (std::size_t k : coords) {
      double saved = at[t].data[k];
      at[t].data[k] = saved + step;
      double fp = f.value(at);
      at[t].data[k] = saved - step;
      double fm = f.value(at);
      at[t].data[k] = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm))
        throw std::runtime_error("finite_diff: non-finite function value");
      double numeric = (fp - fm) / (2.0 * step);
      double an = analytic[t].data[k];
      double denom = std::max({std::fabs(an), std::fabs(numeric), 1e-3});
      max_err = std::max(max_err, std::fabs(numeric - an) / denom);
    }
  }
  return max_err;
}

}  // namespace fedgraph
