// Brute-force reference implementations used only to check the library.
// Everything here is written the slow, obvious way on purpose and must stay
// independent of the code paths under test.
#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "fedgraph/dense.hpp"
#include "fedgraph/graph.hpp"
#include "fedgraph/rng.hpp"

namespace oracle {

using fedgraph::DenseMatrix;
using fedgraph::Graph;

inline DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

/// D^(-1/2) (A + I) D^(-1/2) built densely from the edge list.
inline DenseMatrix dense_normalized_adjacency(const Graph& g) {
  DenseMatrix a(g.n, g.n);
  for (auto [u, v] : g.edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  for (std::size_t i = 0; i < g.n; ++i) a(i, i) = 1.0;
  std::vector<double> deg(g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) deg[i] += a(i, j);
  DenseMatrix out(g.n, g.n);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      out(i, j) = a(i, j) / std::sqrt(deg[i] * deg[j]);
  return out;
}

/// Unnormalized graph Laplacian D - A (no self-loops).
inline DenseMatrix dense_laplacian(const Graph& g) {
  DenseMatrix l(g.n, g.n);
  for (auto [u, v] : g.edges) {
    l(u, v) -= 1.0;
    l(v, u) -= 1.0;
    l(u, u) += 1.0;
    l(v, v) += 1.0;
  }
  return l;
}

inline double trace_xt_l_x(const DenseMatrix& l, const DenseMatrix& x) {
  double tr = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j)
    for (std::size_t i = 0; i < l.rows; ++i)
      for (std::size_t k = 0; k < l.rows; ++k) tr += x(i, j) * l(i, k) * x(k, j);
  return tr;
}

inline std::vector<int> connected_components(const Graph& g) {
  std::vector<std::vector<uint32_t>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> comp(g.n, -1);
  int next = 0;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    std::queue<uint32_t> q;
    q.push(static_cast<uint32_t>(s));
    while (!q.empty()) {
      uint32_t u = q.front();
      q.pop();
      for (uint32_t v : adj[u])
        if (comp[v] < 0) {
          comp[v] = next;
          q.push(v);
        }
    }
    ++next;
  }
  return comp;
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, uint64_t key,
                                 double lo = -1.0, double hi = 1.0) {
  DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < m.data.size(); ++k)
    m.data[k] = lo + (hi - lo) * fedgraph::rng::uniform(key, k);
  return m;
}

/// Random undirected graph; every unordered pair drawn independently.
inline Graph random_graph(std::size_t n, double p, uint64_t key, std::size_t classes = 2) {
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (fedgraph::rng::uniform(key, i * n + j) < p)
        edges.emplace_back(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
  std::vector<int32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = static_cast<int32_t>(fedgraph::rng::bits(key ^ 0xabcd, i) % classes);
  std::vector<uint32_t> train, test;
  for (std::size_t i = 0; i < n; ++i)
    (i % 2 == 0 ? train : test).push_back(static_cast<uint32_t>(i));
  return fedgraph::make_graph(n, classes, std::move(edges), std::move(labels), std::move(train),
                              std::move(test));
}

}  // namespace oracle
