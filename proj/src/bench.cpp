// priorshift/bench.cpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "priorshift/bench.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace priorshift {
namespace {

// Uniform in (0, 1], 53-bit resolution.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller; one normal per call, the sine branch is discarded so the
// stream stays independent of call interleaving.
double next_normal(std::mt19937_64& rng) {
  const double u1 = next_uniform(rng);
  const double u2 = next_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

double gaussian_pdf(double d, const GaussianClassSpec& spec) {
  if (spec.variance <= 0.0)
    throw std::invalid_argument("gaussian_pdf: variance must be positive");
  const double diff = d - spec.mean;
  return std::exp(-0.5 * diff * diff / spec.variance) /
         std::sqrt(2.0 * std::numbers::pi * spec.variance);
}

double optimal_boundary(const ProbabilityVector& priors, double mu1, double mu2,
                        double sigma2) {
  if (priors.size() != 2)
    throw std::invalid_argument("optimal_boundary: two classes required");
  if (mu1 == mu2)
    throw std::invalid_argument("optimal_boundary: means must differ");
  if (sigma2 <= 0.0)
    throw std::invalid_argument("optimal_boundary: variance must be positive");
  return 0.5 * (mu1 + mu2) -
         sigma2 * std::log(priors[1] / priors[0]) / (mu2 - mu1);
}

std::vector<LabeledSample> sample_dataset(
    const ProbabilityVector& priors, const std::vector<GaussianClassSpec>& specs,
    std::size_t n, std::uint64_t seed) {
  if (specs.size() != priors.size())
    throw std::invalid_argument("sample_dataset: spec count must match priors");
  if (n == 0) throw std::invalid_argument("sample_dataset: n must be positive");
  for (const auto& spec : specs)
    if (spec.variance <= 0.0)
      throw std::invalid_argument("sample_dataset: variance must be positive");

  std::mt19937_64 rng(seed);
  std::vector<LabeledSample> samples;
  samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = next_uniform(rng);
    std::size_t label = priors.size() - 1;
    double cum = 0.0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
      cum += priors[i];
      if (u <= cum) {
        label = i;
        break;
      }
    }
    const double value =
        specs[label].mean + std::sqrt(specs[label].variance) * next_normal(rng);
    samples.push_back({value, label});
  }
  return samples;
}

ProbabilityVector true_posteriors(double d, const ProbabilityVector& priors,
                                  const std::vector<GaussianClassSpec>& specs) {
  if (specs.size() != priors.size())
    throw std::invalid_argument("true_posteriors: spec count must match priors");
  std::vector<double> weighted(priors.size());
  for (std::size_t i = 0; i < priors.size(); ++i)
    weighted[i] = gaussian_pdf(d, specs[i]) * priors[i];
  return ProbabilityVector::from_unnormalized(std::move(weighted));
}

ExperimentReport run_demo(std::uint64_t seed, std::size_t n,
                          const ProbabilityVector& old_priors,
                          const ProbabilityVector& new_priors,
                          const std::vector<GaussianClassSpec>& specs,
                          const SolverConfig& cfg) {
  const std::size_t classes = old_priors.size();
  if (new_priors.size() != classes || specs.size() != classes)
    throw std::invalid_argument("run_demo: dimension mismatch");

  ExperimentReport report;
  report.total = n;
  report.class_counts.assign(classes, 0);
  report.old_errors.assign(classes, 0);
  report.adapted_errors.assign(classes, 0);

  const bool two_class = classes == 2 && specs[0].mean != specs[1].mean;
  if (two_class) {
    report.boundary_old =
        optimal_boundary(old_priors, specs[0].mean, specs[1].mean,
                         specs[0].variance);
    report.boundary_new =
        optimal_boundary(new_priors, specs[0].mean, specs[1].mean,
                         specs[0].variance);
  } else {
    report.boundary_old = std::numeric_limits<double>::quiet_NaN();
    report.boundary_new = std::numeric_limits<double>::quiet_NaN();
  }

  const std::vector<LabeledSample> samples =
      sample_dataset(new_priors, specs, n, seed);

  std::size_t old_total_errors = 0;
  std::size_t adapted_total_errors = 0;
  for (const LabeledSample& s : samples) {
    report.class_counts[s.label] += 1;

    const ProbabilityVector old_post = true_posteriors(s.value, old_priors, specs);
    const std::size_t old_pred = argmax_lowest(old_post.values());
    if (old_pred != s.label) {
      report.old_errors[s.label] += 1;
      old_total_errors += 1;
    }

    const ProbabilityVector adapted =
        adapt(old_post, old_priors, new_priors, cfg);
    const std::size_t adapted_pred = argmax_lowest(adapted.values());
    if (adapted_pred != s.label) {
      report.adapted_errors[s.label] += 1;
      adapted_total_errors += 1;
    }

    if (two_class) {
      // Tie at the boundary goes to the lower class index, matching argmax.
      const bool lower_first = specs[0].mean < specs[1].mean;
      const std::size_t threshold_pred =
          lower_first ? (s.value <= report.boundary_new ? 0u : 1u)
                      : (s.value >= report.boundary_new ? 0u : 1u);
      if (threshold_pred != adapted_pred) report.boundary_mismatches += 1;
    }
  }

  report.old_error_rate =
      static_cast<double>(old_total_errors) / static_cast<double>(n);
  report.adapted_error_rate =
      static_cast<double>(adapted_total_errors) / static_cast<double>(n);
  return report;
}

void write_histogram(const std::string& path,
                     const std::vector<LabeledSample>& samples,
                     std::size_t class_count) {
  constexpr double kLo = -5.0;
  constexpr double kHi = 5.0;
  constexpr double kWidth = 0.2;
  const std::size_t bins = static_cast<std::size_t>((kHi - kLo) / kWidth + 0.5);

  std::vector<std::vector<std::size_t>> counts(
      class_count, std::vector<std::size_t>(bins, 0));
  for (const LabeledSample& s : samples) {
    if (s.value < kLo || s.value >= kHi) continue;
    const auto bin = static_cast<std::size_t>((s.value - kLo) / kWidth);
    counts[s.label][bin < bins ? bin : bins - 1] += 1;
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_histogram: cannot open " + path);
  for (std::size_t c = 0; c < class_count; ++c)
    for (std::size_t b = 0; b < bins; ++b)
      out << c << '\t' << kLo + kWidth * static_cast<double>(b) << '\t'
          << counts[c][b] << '\n';
}

}  // namespace priorshift
