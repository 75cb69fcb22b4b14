#pragma once

#include <cstdint>
#include <vector>

#include "fedgraph/dense.hpp"

namespace fedgraph {

/// Scalar-valued differentiable function of a list of tensors, with an
/// analytic gradient. The gradient implementation under test must not share
/// code with the finite-difference path that checks it.
struct DiffFunction {
  virtual ~DiffFunction() = default;
  virtual double value(const std::vector<DenseMatrix>& inputs) const = 0;
  virtual std::vector<DenseMatrix> gradient(const std::vector<DenseMatrix>& inputs) const = 0;
};

/// Central differences (step 1e-5) versus the analytic gradient; returns the
/// max relative error over sampled coordinates. Coordinates are checked
/// exhaustively up to max_coords per tensor, then subsampled by counter rng.
/// Relative error uses denominator max(|analytic|, |numeric|, 1e-3) so tiny
/// gradients are compared absolutely. Throws on non-finite values.
double finite_diff_max_rel_err(const DiffFunction& f, std::vector<DenseMatrix> at,
                               std::size_t max_coords = 200, double step = 1e-5,
                               uint64_t sample_key = 0x5eed);

}  // namespace fedgraph
