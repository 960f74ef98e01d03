#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lvg {

/// Dense row-major matrix of doubles. Sized for desk-scale Newton systems
/// (a few thousand unknowns), not for large-scale linear algebra.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(std::size_t column)
      : std::runtime_error("singular matrix: no acceptable pivot in column " +
                           std::to_string(column)),
        column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// LU factorization with partial pivoting, stored in place. A pivot whose
/// magnitude falls below 1e-14 times the largest entry of the input raises
/// SingularMatrixError.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;  ///< row permutation applied to the input
};

LuFactors lu_factor(Matrix a);

/// Solves A x = b using factors from lu_factor.
std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b);

}  // namespace lvg
