// priorshift/core.cpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "priorshift/core.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace priorshift {
namespace {

void check_same_size(const ProbabilityVector& a, const ProbabilityVector& b,
                     const char* where) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

std::vector<double> clamp_and_normalize(std::vector<double> values,
                                        const char* where,
                                        bool require_unit_sum) {
  if (values.size() < 2)
    throw std::invalid_argument(std::string(where) + ": need at least 2 classes");
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(where) +
                                  ": elements must be finite and nonnegative");
    sum += v;
  }
  if (require_unit_sum && std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(where) + ": elements must sum to 1");
  if (sum <= 0.0)
    throw std::invalid_argument(std::string(where) + ": sum must be positive");

  const double eps = clamp_epsilon();
  double clamped_sum = 0.0;
  for (double& v : values) {
    v /= sum;
    if (v < eps) v = eps;
    clamped_sum += v;
  }
  for (double& v : values) v /= clamped_sum;
  return values;
}

}  // namespace

double clamp_epsilon() {
  if (const char* env = std::getenv("PRIORSHIFT_EPS")) {
    char* end = nullptr;
    const double eps = std::strtod(env, &end);
    if (end != env && std::isfinite(eps) && eps > 0.0 && eps < 1e-2) return eps;
  }
  return kDefaultEps;
}

ProbabilityVector::ProbabilityVector(std::vector<double> values)
    : values_(clamp_and_normalize(std::move(values), "ProbabilityVector",
                                  /*require_unit_sum=*/true)) {}

ProbabilityVector ProbabilityVector::from_unnormalized(
    std::vector<double> values) {
  return ProbabilityVector(
      clamp_and_normalize(std::move(values), "ProbabilityVector",
                          /*require_unit_sum=*/false),
      unchecked_t{});
}

LikelihoodVector::LikelihoodVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty())
    throw std::invalid_argument("LikelihoodVector: empty");
  double sum = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(
          "LikelihoodVector: elements must be finite and positive");
    sum += v;
  }
  for (double& v : values_) v /= sum;
}

AdaptationMatrix::AdaptationMatrix(DenseMatrix entries)
    : entries_(std::move(entries)) {
  const std::size_t n = entries_.rows();
  if (entries_.cols() != n)
    throw std::invalid_argument("AdaptationMatrix: must be square");
  for (std::size_t j = 0; j < n; ++j) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(entries_(i, j) > 0.0))
        throw std::invalid_argument("AdaptationMatrix: entries must be positive");
      col_sum += entries_(i, j);
    }
    if (std::fabs(col_sum - 1.0) > 1e-12)
      throw std::invalid_argument("AdaptationMatrix: columns must sum to 1");
  }
}

DenseMatrix build_m_matrix(const ProbabilityVector& posteriors,
                           const ProbabilityVector& priors) {
  check_same_size(posteriors, priors, "build_m_matrix");
  const std::size_t n = posteriors.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = (i == j) ? (posteriors[i] - 1.0) * priors[i]
                         : posteriors[i] * priors[j];
  return m;
}

AdaptationMatrix build_a_matrix(const ProbabilityVector& posteriors,
                                const ProbabilityVector& priors) {
  DenseMatrix a = build_m_matrix(posteriors, priors);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 1.0;
  return AdaptationMatrix(std::move(a));
}

SolveReport recover_likelihoods(const ProbabilityVector& posteriors,
                                const ProbabilityVector& priors,
                                const SolverConfig& cfg) {
  const DenseMatrix m = build_m_matrix(posteriors, priors);
  const AdaptationMatrix a = build_a_matrix(posteriors, priors);

  PowerIterationResult pi =
      power_iteration(a.entries(), cfg.tol, cfg.max_iter);

  const std::vector<double> residual = matvec(m, pi.vector);
  double residual_inf = 0.0;
  for (double r : residual) residual_inf = std::max(residual_inf, std::fabs(r));

  SolveReport report{LikelihoodVector(std::move(pi.vector)), pi.iterations,
                     residual_inf,
                     pi.converged && residual_inf <= kResidualTol};
  return report;
}

LikelihoodVector closed_form_likelihoods(const ProbabilityVector& posteriors,
                                         const ProbabilityVector& priors) {
  check_same_size(posteriors, priors, "closed_form_likelihoods");
  std::vector<double> ratios(posteriors.size());
  for (std::size_t i = 0; i < ratios.size(); ++i)
    ratios[i] = posteriors[i] / priors[i];
  return LikelihoodVector(std::move(ratios));
}

ProbabilityVector update_posteriors(const LikelihoodVector& likelihoods,
                                    const ProbabilityVector& new_priors) {
  if (likelihoods.size() != new_priors.size())
    throw std::invalid_argument("update_posteriors: dimension mismatch");
  std::vector<double> weighted(likelihoods.size());
  for (std::size_t i = 0; i < weighted.size(); ++i)
    weighted[i] = likelihoods[i] * new_priors[i];
  return ProbabilityVector::from_unnormalized(std::move(weighted));
}

ProbabilityVector adapt(const ProbabilityVector& posteriors,
                        const ProbabilityVector& old_priors,
                        const ProbabilityVector& new_priors,
                        const SolverConfig& cfg, SolveMethod method) {
  check_same_size(posteriors, old_priors, "adapt");
  check_same_size(posteriors, new_priors, "adapt");

  if (method == SolveMethod::kRatio)
    return update_posteriors(closed_form_likelihoods(posteriors, old_priors),
                             new_priors);

  const SolveReport report = recover_likelihoods(posteriors, old_priors, cfg);
  if (!report.converged)
    throw SolverError("adapt: eigensolver did not converge within " +
                      std::to_string(cfg.max_iter) + " iterations");
  return update_posteriors(report.likelihoods, new_priors);
}

}  // namespace priorshift
