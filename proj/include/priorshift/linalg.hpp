// priorshift/linalg.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef PRIORSHIFT_LINALG_HPP_
#define PRIORSHIFT_LINALG_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace priorshift {

/// Row-major dense matrix of doubles. Class counts are small (n <= 1e4),
/// so dense storage is used throughout; no sparse formats.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// Standard matrix-vector product. Throws std::invalid_argument on a
/// dimension mismatch.
std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x);

struct PowerIterationResult {
  std::vector<double> vector;     // L1-normalized, positive
  std::size_t iterations = 0;
  bool converged = false;
};

/// Dominant-eigenvector power iteration for a strictly positive
/// column-stochastic matrix. The iterate is kept L1-normalized (exactly the
/// quantity such a matrix preserves) and the loop stops when the L1 step
/// between successive iterates drops below tol, or after max_iter steps
/// (then flagged non-converged). Starts from the uniform positive vector.
PowerIterationResult power_iteration(const DenseMatrix& a, double tol,
                                     std::size_t max_iter);

struct SymmetricEigen {
  std::vector<double> values;   // unordered
  DenseMatrix vectors;          // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Intended for
/// the small validation matrices here (n <= 64); simplicity over speed.
SymmetricEigen jacobi_eigen(const DenseMatrix& s);

/// Eigenvector of m^T * m with the smallest eigenvalue, L1-normalized with
/// positive orientation. This is the classic homogeneous least-squares
/// route to m*x = 0 and is used as a cross-check against the
/// power-iteration path.
std::vector<double> gram_smallest_eigvec(const DenseMatrix& m);

}  // namespace priorshift

#endif  // PRIORSHIFT_LINALG_HPP_
