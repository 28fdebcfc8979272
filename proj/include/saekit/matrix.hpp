#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "saekit/errors.hpp"

namespace saekit {

// Dense row-major matrix of doubles. All training and metric arithmetic is
// double precision; datasets are stored as f32 and widened on access.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }

  std::span<double> row(size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(size_t r) const {
    return {data.data() + r * cols, cols};
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// y = A x
inline void matvec(const Matrix& a, std::span<const double> x,
                   std::span<double> y) {
  if (x.size() != a.cols || y.size() != a.rows)
    throw ShapeError("matvec: dimension mismatch");
  for (size_t r = 0; r < a.rows; ++r) {
    y[r] = dot(a.row(r), x);
  }
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace saekit
