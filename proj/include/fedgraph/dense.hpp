#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace fedgraph {

/// Row-major dense matrix of 64-bit floats. Training arithmetic runs in
/// doubles throughout; the 32-bit wire format exists only in the byte meter.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rs) {
    DenseMatrix m(rs.size(), rs.size() ? rs.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& r : rs) {
      if (r.size() != m.cols) throw std::invalid_argument("from_rows: ragged rows");
      std::size_t j = 0;
      for (double v : r) m.data[i * m.cols + j++] = v;
      ++i;
    }
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  std::size_t size() const { return data.size(); }
  bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

inline void require_shape(const DenseMatrix& m, std::size_t r, std::size_t c, const char* what) {
  if (m.rows != r || m.cols != c)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

bool all_finite(std::span<const double> xs);
void require_finite(const DenseMatrix& m, const char* what);

}  // namespace fedgraph
