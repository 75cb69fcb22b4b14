#include "fedgraph/dense.hpp"

#include <cmath>

namespace fedgraph {

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_finite(const DenseMatrix& m, const char* what) {
  if (!all_finite(m.data))
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace fedgraph
