// priorshift/linalg.cpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "priorshift/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace priorshift {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("DenseMatrix: zero dimension");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols())
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

PowerIterationResult power_iteration(const DenseMatrix& a, double tol,
                                     std::size_t max_iter) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("power_iteration: matrix must be square");
  const std::size_t n = a.rows();

  PowerIterationResult result;
  result.vector.assign(n, 1.0 / static_cast<double>(n));

  std::vector<double> next(n);
  for (std::size_t k = 0; k < max_iter; ++k) {
    next = matvec(a, result.vector);
    double sum = 0.0;
    for (double v : next) sum += v;
    for (double& v : next) v /= sum;

    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      step += std::fabs(next[i] - result.vector[i]);

    result.vector.swap(next);
    result.iterations = k + 1;
    if (step < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

SymmetricEigen jacobi_eigen(const DenseMatrix& s) {
  if (s.rows() != s.cols())
    throw std::invalid_argument("jacobi_eigen: matrix must be square");
  const std::size_t n = s.rows();

  DenseMatrix a = s;
  DenseMatrix v = DenseMatrix::identity(n);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) /
            (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen result{std::vector<double>(n), std::move(v)};
  for (std::size_t i = 0; i < n; ++i) result.values[i] = a(i, i);
  return result;
}

std::vector<double> gram_smallest_eigvec(const DenseMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("gram_smallest_eigvec: matrix must be square");
  const std::size_t n = m.rows();

  DenseMatrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += m(k, i) * m(k, j);
      gram(i, j) = acc;
    }
  }

  const SymmetricEigen eig = jacobi_eigen(gram);
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (eig.values[i] < eig.values[best]) best = i;

  std::vector<double> x(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = eig.vectors(i, best);
    sum += x[i];
  }
  if (sum == 0.0)
    throw std::runtime_error("gram_smallest_eigvec: degenerate eigenvector");
  // Orient positive and L1-normalize.
  for (double& v : x) v /= sum;
  return x;
}

}  // namespace priorshift
