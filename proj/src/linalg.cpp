#include "inrfort/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace inrfort {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    std::ostringstream msg;
    msg << "matmul: dimension mismatch (" << a.rows << "x" << a.cols
        << " times " << b.rows << "x" << b.cols << ")";
    throw std::invalid_argument(msg.str());
  }
  Matrix c(a.rows, b.cols, 0.0);
  // ikj order: the inner j loop is over independent contiguous elements and
  // each c(i,j) still accumulates over k in increasing order.
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      const double* brow = b.row(k);
      for (std::size_t j = 0; j < b.cols; ++j) {
        crow[j] += aik * brow[j];
      }
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double l1_norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

void axpy(double alpha, const Vector& x, Vector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("axpy: length mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const Matrix& m) { return all_finite(m.data); }

}  // namespace inrfort
