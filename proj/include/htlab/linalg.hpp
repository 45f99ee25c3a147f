#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace htlab::num {

// Dense row-major d x d matrix; the volatility matrices here are tiny, so a
// pivoted Gaussian elimination is all the linear algebra this project needs.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;  // row-major, n*n

  Matrix() = default;
  explicit Matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves A x = b with partial pivoting.
inline std::vector<double> solve_linear(Matrix m, std::vector<double> b) {
  const std::size_t n = m.n;
  if (b.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  const double tiny = std::max(scale, 1.0) * 1e-14;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < tiny)
      throw SingularMatrixError("solve_linear: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

inline bool is_invertible(const Matrix& m) {
  try {
    std::vector<double> b(m.n, 1.0);
    (void)solve_linear(m, b);
    return true;
  } catch (const SingularMatrixError&) {
    return false;
  }
}

}  // namespace htlab::num
