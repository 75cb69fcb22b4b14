#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fedgraph/gradcheck.hpp"
#include "fedgraph/laplacian.hpp"
#include "oracles.hpp"

using namespace fedgraph;

TEST_CASE("identical latents give zero penalty and zero gradient") {
  Graph g = oracle::random_graph(12, 0.3, 5);
  NeighborSets ns = neighbor_sets(g);
  DenseMatrix x(12, 4);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) x(i, j) = 3.0 + static_cast<double>(j);
  CHECK(laplacian_reg(x, ns) == 0.0);
  DenseMatrix grad = laplacian_reg_grad(x, ns);
  for (double v : grad.data) CHECK(v == 0.0);
}

TEST_CASE("two-node hand evaluation") {
  Graph g = make_graph(2, 1, {{0, 1}}, {0, 0}, {}, {});
  NeighborSets ns = neighbor_sets(g);
  DenseMatrix x = DenseMatrix::from_rows({{1, 0}, {0, 0}});
  // ordered pair terms {0,1,1,0}, denominator |N_0|+|N_1| = 4
  CHECK(laplacian_reg(x, ns) == doctest::Approx(0.5).epsilon(1e-15));
  DenseMatrix grad = laplacian_reg_grad(x, ns);
  CHECK(grad(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(grad(0, 1) == 0.0);
  CHECK(grad(1, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(grad(1, 1) == 0.0);
}

TEST_CASE("edge-free graphs only have self pairs") {
  Graph g = make_graph(2, 1, {}, {0, 0}, {}, {});
  NeighborSets ns = neighbor_sets(g);
  DenseMatrix x = oracle::random_matrix(2, 3, 15);
  CHECK(laplacian_reg(x, ns) == 0.0);
}

TEST_CASE("matches the dense Laplacian trace oracle") {
  for (uint64_t trial = 0; trial < 6; ++trial) {
    std::size_t n = 3 + rng::bits(trial, 1) % 28;
    Graph g = oracle::random_graph(n, 0.25, rng::chain(300, trial));
    NeighborSets ns = neighbor_sets(g);
    DenseMatrix x = oracle::random_matrix(n, 5, rng::chain(301, trial));
    double via_trace = 2.0 * oracle::trace_xt_l_x(oracle::dense_laplacian(g), x) /
                       static_cast<double>(ns.total());
    CHECK(std::fabs(laplacian_reg(x, ns) - via_trace) <= 1e-10);
  }
}

TEST_CASE("translation invariance and per-component gradient sums") {
  Graph g = oracle::random_graph(15, 0.15, 909);
  NeighborSets ns = neighbor_sets(g);
  DenseMatrix x = oracle::random_matrix(15, 3, 910);
  double base = laplacian_reg(x, ns);
  DenseMatrix shifted = x;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) shifted(i, j) += 17.5 - static_cast<double>(j);
  CHECK(std::fabs(laplacian_reg(shifted, ns) - base) <= 1e-12 * std::max(1.0, base));

  DenseMatrix grad = laplacian_reg_grad(x, ns);
  std::vector<int> comp = oracle::connected_components(g);
  int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
  for (int c = 0; c < ncomp; ++c)
    for (std::size_t j = 0; j < x.cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows; ++i)
        if (comp[i] == c) s += grad(i, j);
      CHECK(std::fabs(s) <= 1e-12);
    }
}

TEST_CASE("gradient passes finite differences") {
  struct RegFn : DiffFunction {
    const NeighborSets* ns;
    double value(const std::vector<DenseMatrix>& in) const override {
      return laplacian_reg(in[0], *ns);
    }
    std::vector<DenseMatrix> gradient(const std::vector<DenseMatrix>& in) const override {
      return {laplacian_reg_grad(in[0], *ns)};
    }
  };
  Graph g = oracle::random_graph(6, 0.5, 808);
  NeighborSets ns = neighbor_sets(g);
  RegFn f;
  f.ns = &ns;
  CHECK(finite_diff_max_rel_err(f, {oracle::random_matrix(6, 4, 807)}) <= 1e-6);
}

TEST_CASE("head-averaged latents divide the whole-matrix value") {
  Graph g = oracle::random_graph(9, 0.4, 404);
  NeighborSets ns = neighbor_sets(g);
  DenseMatrix x = oracle::random_matrix(9, 8, 405);  // 2 heads of width 4
  double per_head = 0.0;
  for (std::size_t l = 0; l < 2; ++l) {
    DenseMatrix block(9, 4);
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 4; ++j) block(i, j) = x(i, l * 4 + j);
    per_head += laplacian_reg(block, ns);
  }
  per_head /= 2.0;
  CHECK(std::fabs(laplacian_reg(x, ns, 2) - per_head) <= 1e-12);

  DenseMatrix gh = laplacian_reg_grad(x, ns, 2);
  DenseMatrix g1 = laplacian_reg_grad(x, ns, 1);
  for (std::size_t k = 0; k < gh.data.size(); ++k)
    CHECK(gh.data[k] == doctest::Approx(0.5 * g1.data[k]).epsilon(1e-12));
}

TEST_CASE("total loss composition") {
  CHECK(total_loss(1.0, 0.5, 100.0) == doctest::Approx(51.0));
  CHECK(total_loss(3.25, 0.7, 0.0) == 3.25);
  CHECK(total_loss(3.25, 0.0, 42.0) == 3.25);
}

TEST_CASE("row-count mismatch is rejected") {
  Graph g = oracle::random_graph(5, 0.5, 123);
  NeighborSets ns = neighbor_sets(g);
  DenseMatrix x = oracle::random_matrix(4, 3, 124);
  CHECK_THROWS_AS(laplacian_reg(x, ns), std::invalid_argument);
  CHECK_THROWS_AS(laplacian_reg_grad(x, ns), std::invalid_argument);
}
