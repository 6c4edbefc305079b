// priorshift/core.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef PRIORSHIFT_CORE_HPP_
#define PRIORSHIFT_CORE_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "priorshift/linalg.hpp"

namespace priorshift {

/// Converged solves guarantee ||M*x||_inf at or below this bound.
inline constexpr double kResidualTol = 1e-10;

/// Default clamping floor for probability elements.
inline constexpr double kDefaultEps = 1e-12;

/// Clamping epsilon for probability elements; the PRIORSHIFT_EPS
/// environment variable overrides the default of 1e-12.
double clamp_epsilon();

/// Raised when the eigensolver fails to converge within its iteration cap.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point on the probability simplex (posteriors or priors): length >= 2,
/// strictly positive elements, unit sum. Inputs containing exact zeros or
/// ones are clamped to the epsilon floor and renormalized so that downstream
/// matrices stay strictly positive.
class ProbabilityVector {
 public:
  /// Validates (finite, nonnegative, sum within 1e-9 of 1), clamps each
  /// element to the epsilon floor and renormalizes.
  explicit ProbabilityVector(std::vector<double> values);

  /// Same clamping but accepts any nonnegative vector with positive sum,
  /// e.g. raw class counts.
  static ProbabilityVector from_unnormalized(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  struct unchecked_t {};
  ProbabilityVector(std::vector<double> values, unchecked_t)
      : values_(std::move(values)) {}

  std::vector<double> values_;
};

/// Strictly positive vector defined up to scale; the stored representative
/// is L1-normalized. Any positive scalar multiple denotes the same
/// likelihood class.
class LikelihoodVector {
 public:
  explicit LikelihoodVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// The n x n matrix A = M + I: strictly positive with unit column sums, so
/// its Perron eigenvalue is exactly 1 and the corresponding positive
/// eigenvector carries the likelihoods up to scale.
class AdaptationMatrix {
 public:
  explicit AdaptationMatrix(DenseMatrix entries);

  std::size_t size() const { return entries_.rows(); }
  const DenseMatrix& entries() const { return entries_; }

 private:
  DenseMatrix entries_;
};

struct SolverConfig {
  double tol = 1e-13;          // L1 step threshold between iterates
  std::size_t max_iter = 10000;
};

/// Recovered likelihoods plus convergence diagnostics.
struct SolveReport {
  LikelihoodVector likelihoods;
  std::size_t iterations = 0;
  double residual_inf = 0.0;   // ||M * x||_inf
  bool converged = false;
};

enum class SolveMethod {
  kRatio,  // closed-form posterior/prior ratio (default production path)
  kEigen,  // Perron eigenvector of A by power iteration
};

/// M with M[i][i] = (P(Ci|T) - 1) * P(Ci) and M[i][j] = P(Ci|T) * P(Cj);
/// the likelihood vector is the nontrivial solution of M * x = 0.
DenseMatrix build_m_matrix(const ProbabilityVector& posteriors,
                           const ProbabilityVector& priors);

/// A = M + I.
AdaptationMatrix build_a_matrix(const ProbabilityVector& posteriors,
                                const ProbabilityVector& priors);

/// Likelihood recovery through the eigen path: power iteration on A,
/// residual measured as ||M * x||_inf. Non-convergence is reported in the
/// returned flag, never silently dropped.
SolveReport recover_likelihoods(const ProbabilityVector& posteriors,
                                const ProbabilityVector& priors,
                                const SolverConfig& cfg = {});

/// Closed-form likelihoods: L1 normalization of posterior[i] / prior[i].
/// Serves as the cheap production path and as a permanent cross-check of
/// the eigen path.
LikelihoodVector closed_form_likelihoods(const ProbabilityVector& posteriors,
                                         const ProbabilityVector& priors);

/// Bayes' Rule with new priors: (L_i * q_i) / sum_j (L_j * q_j).
ProbabilityVector update_posteriors(const LikelihoodVector& likelihoods,
                                    const ProbabilityVector& new_priors);

/// Full pipeline: recover likelihoods from (posteriors, old_priors), then
/// re-apply Bayes' Rule with new_priors. Throws SolverError if the eigen
/// method fails to converge.
ProbabilityVector adapt(const ProbabilityVector& posteriors,
                        const ProbabilityVector& old_priors,
                        const ProbabilityVector& new_priors,
                        const SolverConfig& cfg = {},
                        SolveMethod method = SolveMethod::kRatio);

}  // namespace priorshift

#endif  // PRIORSHIFT_CORE_HPP_
