#pragma once

#include <string>

#include "fedgraph/dense.hpp"
#include "fedgraph/graph.hpp"

namespace fedgraph {

struct DatasetMeta {
  std::size_t n = 0, feature_dim = 0, num_classes = 0;
};

/// Reads meta.tsv ("n<TAB>d<TAB>c" on one line, '#' lines ignored).
DatasetMeta load_meta(const std::string& dir);

struct Dataset {
  Graph graph;
  DenseMatrix features;  // n x d
  std::string dir;
};

/// Loads a dataset directory: meta.tsv, edges.tsv, labels.tsv, train.txt,
/// test.txt, features.tsv.
Dataset load_dataset(const std::string& dir);

/// Shortest decimal form that parses back to the same double; used for all
/// emitted numbers so reruns are byte-identical.
std::string format_double(double v);

}  // namespace fedgraph
