#include "lvg/linalg.hpp"

#include <cmath>

namespace lvg {

LuFactors lu_factor(Matrix a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("lu_factor: matrix must be square");
  }
  const std::size_t n = a.rows();

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  }
  const double pivot_floor = 1e-14 * scale;

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_abs = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::abs(a(r, col));
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (!(best_abs > pivot_floor) || !std::isfinite(best_abs)) {
      throw SingularMatrixError(col);
    }
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
      std::swap(perm[col], perm[best]);
    }
    const double inv_pivot = 1.0 / a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      double m = a(r, col) * inv_pivot;
      a(r, col) = m;
      if (m == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= m * a(col, j);
    }
  }
  return LuFactors{std::move(a), std::move(perm)};
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b) {
  const std::size_t n = f.lu.rows();
  if (b.size() != n) {
    throw std::invalid_argument("lu_solve: right-hand side size mismatch");
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];

  // forward substitution, unit lower triangle
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  // back substitution
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

}  // namespace lvg
