#pragma once

#include <cstddef>
#include <vector>

namespace inrfort {

using Vector = std::vector<double>;

// Row-major dense matrix of doubles. Value type, shape fixed at construction.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  std::size_t size() const { return rows * cols; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// C = A * B. Accumulation over the inner dimension is strictly left-to-right
// for every output element, so results are reproducible run to run.
// Throws std::invalid_argument naming both shapes on a dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

double dot(const Vector& a, const Vector& b);
double l2_norm(const Vector& v);
double l1_norm(const Vector& v);

// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

}  // namespace inrfort
