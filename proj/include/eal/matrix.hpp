#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace eal {

// Dense row-major matrix of doubles.  Rows are instances, columns features.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(size_t i, size_t j) { return data[i * cols + j]; }
  double at(size_t i, size_t j) const { return data[i * cols + j]; }

  std::span<double> row(size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(size_t i) const { return {data.data() + i * cols, cols}; }

  Matrix take_rows(std::span<const int> idx) const {
    Matrix out(idx.size(), cols);
    for (size_t r = 0; r < idx.size(); ++r) {
      const auto src = row(static_cast<size_t>(idx[r]));
      std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
  }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace eal
