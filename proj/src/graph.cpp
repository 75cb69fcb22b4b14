#include "fedgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fedgraph {

namespace {

void check_mask(const std::vector<uint32_t>& mask, std::size_t n, const char* name) {
  for (uint32_t id : mask)
    if (id >= n)
      throw std::invalid_argument(std::string(name) + ": node id " + std::to_string(id) +
                                  " out of range (n=" + std::to_string(n) + ")");
}

}  // namespace

Graph make_graph(std::size_t n, std::size_t num_classes,
                 std::vector<std::pair<uint32_t, uint32_t>> edges,
                 std::vector<int32_t> labels, std::vector<uint32_t> train_mask,
                 std::vector<uint32_t> test_mask, std::size_t feature_dim) {
  if (labels.size() != n) throw std::invalid_argument("labels: expected one entry per node");

  for (auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(u) + "," +
                                  std::to_string(v) + ") with n=" + std::to_string(n));
    if (u == v)
      throw std::invalid_argument("self-loop in edge list at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  for (int32_t l : labels)
    if (l < -1 || l >= static_cast<int32_t>(num_classes))
      throw std::invalid_argument("label " + std::to_string(l) + " outside [0," +
                                  std::to_string(num_classes) + ") or -1");

  check_mask(train_mask, n, "train mask");
  check_mask(test_mask, n, "test mask");
  std::sort(train_mask.begin(), train_mask.end());
  train_mask.erase(std::unique(train_mask.begin(), train_mask.end()), train_mask.end());
  std::sort(test_mask.begin(), test_mask.end());
  test_mask.erase(std::unique(test_mask.begin(), test_mask.end()), test_mask.end());

  for (uint32_t id : train_mask)
    if (labels[id] < 0)
      throw std::invalid_argument("train node " + std::to_string(id) + " has no label");

  std::vector<uint32_t> overlap;
  std::set_intersection(train_mask.begin(), train_mask.end(), test_mask.begin(),
                        test_mask.end(), std::back_inserter(overlap));
  if (!overlap.empty())
    throw std::invalid_argument("train/test masks overlap at node " +
                                std::to_string(overlap.front()));

  Graph g;
  g.n = n;
  g.num_classes = num_classes;
  g.feature_dim = feature_dim;
  g.edges = std::move(edges);
  g.labels = std::move(labels);
  g.train_mask = std::move(train_mask);
  g.test_mask = std::move(test_mask);
  return g;
}

NeighborSets neighbor_sets(const Graph& g) {
  std::vector<uint32_t> degree(g.n, 1);  // self
  for (auto [u, v] : g.edges) {
    ++degree[u];
    ++degree[v];
  }
  NeighborSets ns;
  ns.offsets.resize(g.n + 1, 0);
  for (std::size_t i = 0; i < g.n; ++i) ns.offsets[i + 1] = ns.offsets[i] + degree[i];
  ns.nbrs.resize(ns.offsets.back());

  std::vector<uint32_t> cursor(ns.offsets.begin(), ns.offsets.end() - 1);
  for (std::size_t i = 0; i < g.n; ++i) ns.nbrs[cursor[i]++] = static_cast<uint32_t>(i);
  for (auto [u, v] : g.edges) {
    ns.nbrs[cursor[u]++] = v;
    ns.nbrs[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < g.n; ++i)
    std::sort(ns.nbrs.begin() + ns.offsets[i], ns.nbrs.begin() + ns.offsets[i + 1]);
  return ns;
}

NormalizedAdjacency normalize(const Graph& g) {
  NeighborSets ns = neighbor_sets(g);
  // inv_sqrt_deg[i] * inv_sqrt_deg[j] commutes bitwise, giving exact symmetry
  std::vector<double> inv_sqrt_deg(g.n);
  for (std::size_t i = 0; i < g.n; ++i)
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(ns.offsets[i + 1] - ns.offsets[i]));

  NormalizedAdjacency a;
  a.n = g.n;
  a.row_ptr = ns.offsets;
  a.col = ns.nbrs;
  a.val.resize(a.col.size());
  for (std::size_t i = 0; i < g.n; ++i)
    for (uint32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      a.val[k] = inv_sqrt_deg[i] * inv_sqrt_deg[a.col[k]];
  return a;
}

namespace {

// Streams whitespace-separated tokens, skipping blank lines and '#' comments.
std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

long parse_int(const std::string& tok, const std::string& path) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size()) throw std::runtime_error(path + ": bad integer '" + tok + "'");
  return v;
}

}  // namespace

Graph load_graph(const std::string& edge_file, const std::string& label_file,
                 const std::string& train_file, const std::string& test_file,
                 std::size_t n, std::size_t num_classes, std::size_t feature_dim) {
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (const auto& row : read_rows(edge_file)) {
    if (row.size() != 2) throw std::runtime_error(edge_file + ": expected 'u<TAB>v' per line");
    long u = parse_int(row[0], edge_file), v = parse_int(row[1], edge_file);
    if (u < 0 || v < 0) throw std::runtime_error(edge_file + ": negative node id");
    edges.emplace_back(static_cast<uint32_t>(u), static_cast<uint32_t>(v));
  }

  std::vector<int32_t> labels;
  for (const auto& row : read_rows(label_file)) {
    if (row.size() != 1) throw std::runtime_error(label_file + ": expected one label per line");
    labels.push_back(static_cast<int32_t>(parse_int(row[0], label_file)));
  }
  if (labels.size() != n)
    throw std::runtime_error(label_file + ": got " + std::to_string(labels.size()) +
                             " labels for n=" + std::to_string(n));

  auto read_mask = [&](const std::string& path) {
    std::vector<uint32_t> ids;
    for (const auto& row : read_rows(path)) {
      if (row.size() != 1) throw std::runtime_error(path + ": expected one node id per line");
      long v = parse_int(row[0], path);
      if (v < 0) throw std::runtime_error(path + ": negative node id");
      ids.push_back(static_cast<uint32_t>(v));
    }
    return ids;
  };

  return make_graph(n, num_classes, std::move(edges), std::move(labels),
                    read_mask(train_file), read_mask(test_file), feature_dim);
}

}  // namespace fedgraph
