#include "fedgraph/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fedgraph {

namespace {

std::string path_join(const std::string& dir, const char* file) {
  if (dir.empty()) return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

}  // namespace

DatasetMeta load_meta(const std::string& dir) {
  std::string path = path_join(dir, "meta.tsv");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    DatasetMeta meta;
    long n = 0, d = 0, c = 0;
    if (std::sscanf(line.c_str(), "%ld %ld %ld", &n, &d, &c) != 3 || n < 0 || d < 0 || c < 1)
      throw std::runtime_error(path + ": expected 'n<TAB>d<TAB>c'");
    meta.n = static_cast<std::size_t>(n);
    meta.feature_dim = static_cast<std::size_t>(d);
    meta.num_classes = static_cast<std::size_t>(c);
    return meta;
  }
  throw std::runtime_error(path + ": empty file");
}

Dataset load_dataset(const std::string& dir) {
  DatasetMeta meta = load_meta(dir);
  Dataset ds;
  ds.dir = dir;
  ds.graph = load_graph(path_join(dir, "edges.tsv"), path_join(dir, "labels.tsv"),
                        path_join(dir, "train.txt"), path_join(dir, "test.txt"), meta.n,
                        meta.num_classes, meta.feature_dim);

  std::string path = path_join(dir, "features.tsv");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ds.features = DenseMatrix(meta.n, meta.feature_dim);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (row >= meta.n) throw std::runtime_error(path + ": more feature rows than nodes");
    const char* p = line.c_str();
    double* out = ds.features.data.data() + row * meta.feature_dim;
    for (std::size_t j = 0; j < meta.feature_dim; ++j) {
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p)
        throw std::runtime_error(path + ": row " + std::to_string(row) + " has fewer than " +
                                 std::to_string(meta.feature_dim) + " values");
      out[j] = v;
      p = end;
    }
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p != '\0')
      throw std::runtime_error(path + ": row " + std::to_string(row) + " has trailing data");
    ++row;
  }
  if (row != meta.n)
    throw std::runtime_error(path + ": got " + std::to_string(row) + " rows for n=" +
                             std::to_string(meta.n));
  require_finite(ds.features, "features");
  return ds;
}

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace fedgraph
