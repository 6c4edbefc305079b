// priorshift/bench.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef PRIORSHIFT_BENCH_HPP_
#define PRIORSHIFT_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "priorshift/core.hpp"

namespace priorshift {

/// Per-class 1-D Gaussian likelihood model (shared variance across classes).
struct GaussianClassSpec {
  double mean = 0.0;
  double variance = 1.0;  // strictly positive
};

struct LabeledSample {
  double value = 0.0;
  std::size_t label = 0;
};

/// Result of the synthetic two-Gaussian prior-shift experiment.
struct ExperimentReport {
  std::size_t total = 0;
  std::vector<std::size_t> class_counts;     // samples per true class
  std::vector<std::size_t> old_errors;       // per class, old-prior classifier
  std::vector<std::size_t> adapted_errors;   // per class, adapted classifier
  double old_error_rate = 0.0;
  double adapted_error_rate = 0.0;
  // Analytic decision boundaries (two-class runs only; NaN otherwise).
  double boundary_old = 0.0;
  double boundary_new = 0.0;
  // Samples whose adapted-posterior decision disagrees with thresholding
  // at boundary_new (two-class runs only).
  std::size_t boundary_mismatches = 0;
};

double gaussian_pdf(double d, const GaussianClassSpec& spec);

/// Threshold where the two class posteriors are equal for unequal means and
/// shared variance. For means -1/+1 and unit variance this reduces to
/// -0.5 * ln(pi2 / pi1).
double optimal_boundary(const ProbabilityVector& priors, double mu1, double mu2,
                        double sigma2);

/// Draws n labeled samples: label by prior, value from the labeled class's
/// Gaussian. Deterministic given the seed (mt19937-64 driving a Box-Muller
/// transform; sampling is sequential per seed).
std::vector<LabeledSample> sample_dataset(const ProbabilityVector& priors,
                                          const std::vector<GaussianClassSpec>& specs,
                                          std::size_t n, std::uint64_t seed);

/// Bayes posteriors of sample d under the given priors and Gaussian
/// likelihoods; stands in for a direct posterior model.
ProbabilityVector true_posteriors(double d, const ProbabilityVector& priors,
                                  const std::vector<GaussianClassSpec>& specs);

/// Samples data under new_priors, classifies each sample by (a) argmax of
/// the old-prior posteriors and (b) argmax of the adapted posteriors, and
/// reports both error rates. Argmax ties break to the lowest class index.
ExperimentReport run_demo(std::uint64_t seed, std::size_t n,
                          const ProbabilityVector& old_priors,
                          const ProbabilityVector& new_priors,
                          const std::vector<GaussianClassSpec>& specs,
                          const SolverConfig& cfg = {});

/// Per-class histogram counts, bin width 0.2 over [-5, 5); samples outside
/// the range are dropped. One line per bin per class:
/// class_index<TAB>bin_left<TAB>count.
void write_histogram(const std::string& path,
                     const std::vector<LabeledSample>& samples,
                     std::size_t class_count);

}  // namespace priorshift

#endif  // PRIORSHIFT_BENCH_HPP_
