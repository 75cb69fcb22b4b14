#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fedgraph {

/// Immutable undirected topology with labels and train/test masks.
/// Edges are stored canonically as (min, max) pairs, deduplicated, with no
/// self-loops; self-loops enter only during normalization. Instances are
/// safe to share across parallel workers once constructed.
struct Graph {
  std::size_t n = 0;
  std::size_t num_classes = 0;
  std::size_t feature_dim = 0;  // metadata only; features live with the clients
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  std::vector<int32_t> labels;       // class id in [0, c), or -1 for unlabeled
  std::vector<uint32_t> train_mask;  // sorted, each node labeled
  std::vector<uint32_t> test_mask;   // sorted, disjoint from train_mask

  bool is_labeled(std::size_t i) const { return labels[i] >= 0; }
};

/// Validates and canonicalizes raw graph inputs. Duplicate undirected edges
/// (including both-direction dumps) collapse to one; errors on out-of-range
/// endpoints, self-loops, unlabeled train nodes and overlapping masks.
Graph make_graph(std::size_t n, std::size_t num_classes,
                 std::vector<std::pair<uint32_t, uint32_t>> edges,
                 std::vector<int32_t> labels, std::vector<uint32_t> train_mask,
                 std::vector<uint32_t> test_mask, std::size_t feature_dim = 0);

/// Per-node sorted neighbor lists, each including the node itself.
/// total() == n + 2 * |edges|.
struct NeighborSets {
  std::vector<uint32_t> offsets;  // size n + 1
  std::vector<uint32_t> nbrs;

  std::size_t n() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const uint32_t> of(std::size_t i) const {
    return {nbrs.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::size_t total() const { return nbrs.size(); }
};

NeighborSets neighbor_sets(const Graph& g);

/// CSR form of the symmetrically normalized adjacency with self-loops:
/// value(i,j) = 1/sqrt(deg(i) * deg(j)) for j in N_i, deg counting the loop.
/// Symmetric in stored values; row i's pattern equals N_i.
struct NormalizedAdjacency {
  std::size_t n = 0;
  std::vector<uint32_t> row_ptr;  // size n + 1
  std::vector<uint32_t> col;      // sorted within each row
  std::vector<double> val;
};

NormalizedAdjacency normalize(const Graph& g);

/// Loads a graph from the plain-text dataset files ('#' lines ignored):
/// edges "u<TAB>v" per line, labels one int per line (-1 unlabeled),
/// masks one node id per line. n and c come from the dataset header.
Graph load_graph(const std::string& edge_file, const std::string& label_file,
                 const std::string& train_file, const std::string& test_file,
                 std::size_t n, std::size_t num_classes, std::size_t feature_dim = 0);

}  // namespace fedgraph
