#pragma once

#include <cstddef>
#include <cmath>
#include <string>
#include <vector>

#include "hinn/error.hpp"
#include "hinn/rng.hpp"

namespace hinn {

using Vector = std::vector<double>;

// Dense row-major matrix. Values are plain doubles; datasets here are tiny
// (thousands of rows at most), so 64-bit precision everywhere beats speed.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, data.size() == rows * cols

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool empty() const { return rows == 0 || cols == 0; }
};

inline std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

// C = A * B. The accumulation runs in (i, k, j) saxpy order: for each output
// entry the k-sum is strictly ascending. Several tests pin bit-exact equality
// against reference loops that sum the same way, so do not reorder.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    throw ShapeError("matmul: shapes " + shape_str(a) + " and " + shape_str(b) +
                     " are incompatible");
  }
  Matrix c(a.rows, b.cols);
  const std::size_t n = b.cols;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* crow = &c.data[i * n];
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.data[i * a.cols + k];
      const double* brow = &b.data[k * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

// C = Aᵀ * B without materializing Aᵀ.
inline Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) {
    throw ShapeError("matmul_at_b: shapes " + shape_str(a) + " and " + shape_str(b) +
                     " are incompatible");
  }
  Matrix c(a.cols, b.cols);
  const std::size_t n = b.cols;
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* brow = &b.data[k * n];
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = a.data[k * a.cols + i];
      double* crow = &c.data[i * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

// C = A * Bᵀ, via an explicit transpose so the accumulation order (and thus
// the exact rounding) matches matmul.
inline Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) {
    throw ShapeError("matmul_a_bt: shapes " + shape_str(a) + " and " + shape_str(b) +
                     " are incompatible");
  }
  return matmul(a, transpose(b));
}

// y = A * x for a vector x.
inline Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols != x.size()) {
    throw ShapeError("matvec: shape " + shape_str(a) + " incompatible with vector of length " +
                     std::to_string(x.size()));
  }
  Vector y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = &a.data[i * a.cols];
    double acc = 0.0;
    for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * x[k];
    y[i] = acc;
  }
  return y;
}

inline void add_row_inplace(Matrix& m, const Vector& v) {
  if (m.cols != v.size()) {
    throw ShapeError("add_row_inplace: shape " + shape_str(m) +
                     " incompatible with vector of length " + std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    double* row = &m.data[i * m.cols];
    for (std::size_t j = 0; j < m.cols; ++j) row[j] += v[j];
  }
}

inline void relu_inplace(Matrix& m) {
  for (double& x : m.data) x = x > 0.0 ? x : 0.0;
}

inline Vector relu(const Vector& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
  return out;
}

// Columns [col0, col0 + width) of m as a fresh matrix.
inline Matrix slice_cols(const Matrix& m, std::size_t col0, std::size_t width) {
  Matrix out(m.rows, width);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < width; ++j) out(i, j) = m(i, col0 + j);
  return out;
}

inline Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) {
    throw ShapeError("hconcat: shapes " + shape_str(a) + " and " + shape_str(b) +
                     " have different row counts");
  }
  Matrix c(a.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols; ++j) c(i, a.cols + j) = b(i, j);
  }
  return c;
}

// Glorot-uniform init: entries i.i.d. uniform in [−L, L], L = sqrt(6/(rows+cols)),
// drawn in row-major order. Biases elsewhere start at zero.
inline Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& x : m.data) x = rng.uniform(-limit, limit);
  return m;
}

}  // namespace hinn
