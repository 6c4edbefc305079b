// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "priorshift/bench.hpp"

using priorshift::GaussianClassSpec;
using priorshift::ProbabilityVector;

namespace {

const std::vector<GaussianClassSpec> kDefaultSpecs{{-1.0, 1.0}, {1.0, 1.0}};

double phi(double x) {  // standard normal CDF
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace

TEST_CASE("gaussian_pdf at and near the mean") {
  const GaussianClassSpec spec{2.0, 1.0};
  CHECK(priorshift::gaussian_pdf(2.0, spec) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(priorshift::gaussian_pdf(3.0, spec) ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi))
            .epsilon(1e-14));
  for (double t : {0.1, 0.7, 2.5}) {
    CHECK(priorshift::gaussian_pdf(spec.mean + t, spec) ==
          doctest::Approx(priorshift::gaussian_pdf(spec.mean - t, spec))
              .epsilon(1e-15));
  }
  CHECK_THROWS_AS(priorshift::gaussian_pdf(0.0, GaussianClassSpec{0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("optimal_boundary paper values") {
  CHECK(priorshift::optimal_boundary(ProbabilityVector({0.5, 0.5}), -1.0, 1.0,
                                     1.0) == 0.0);
  CHECK(priorshift::optimal_boundary(ProbabilityVector({0.8, 0.2}), -1.0, 1.0,
                                     1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(priorshift::optimal_boundary(ProbabilityVector({0.2, 0.8}), -1.0, 1.0,
                                     1.0) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("optimal_boundary general means and variance") {
  // Shifted means with equal priors: boundary at the midpoint.
  CHECK(priorshift::optimal_boundary(ProbabilityVector({0.5, 0.5}), 0.0, 2.0,
                                     1.0) == doctest::Approx(1.0));
  // Larger variance scales the prior shift.
  CHECK(priorshift::optimal_boundary(ProbabilityVector({0.8, 0.2}), -1.0, 1.0,
                                     2.0) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(priorshift::optimal_boundary(ProbabilityVector({0.5, 0.5}),
                                               1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("sample_dataset is deterministic and respects the priors") {
  const ProbabilityVector priors({0.8, 0.2});
  const auto a = priorshift::sample_dataset(priors, kDefaultSpecs, 10000, 7);
  const auto b = priorshift::sample_dataset(priors, kDefaultSpecs, 10000, 7);
  REQUIRE(a.size() == 10000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].label == b[i].label);
  }

  std::size_t class0 = 0;
  for (const auto& s : a) class0 += s.label == 0 ? 1 : 0;
  // Binomial 3-sigma band around 8000 (sigma = 40).
  CHECK(class0 >= 8000 - 120);
  CHECK(class0 <= 8000 + 120);

  const auto c = priorshift::sample_dataset(ProbabilityVector({0.5, 0.5}),
                                            kDefaultSpecs, 10000, 11);
  std::size_t half = 0;
  for (const auto& s : c) half += s.label == 0 ? 1 : 0;
  CHECK(half >= 5000 - 150);
  CHECK(half <= 5000 + 150);
}

TEST_CASE("sample_dataset degenerate prior puts all mass on one class") {
  const ProbabilityVector priors({1.0, 0.0});  // clamped internally
  const auto samples = priorshift::sample_dataset(priors, kDefaultSpecs, 500, 3);
  for (const auto& s : samples) CHECK(s.label == 0);
}

TEST_CASE("sample_dataset rejects bad input") {
  CHECK_THROWS_AS(priorshift::sample_dataset(ProbabilityVector({0.5, 0.5}),
                                             kDefaultSpecs, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(priorshift::sample_dataset(ProbabilityVector({0.5, 0.5}),
                                             {{-1.0, 1.0}}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("true_posteriors at symmetry and boundary points") {
  const ProbabilityVector equal({0.5, 0.5});
  const auto p0 = priorshift::true_posteriors(0.0, equal, kDefaultSpecs);
  CHECK(p0[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p0[1] == doctest::Approx(0.5).epsilon(1e-14));

  const ProbabilityVector skew({0.8, 0.2});
  const double boundary = priorshift::optimal_boundary(skew, -1.0, 1.0, 1.0);
  const auto pb = priorshift::true_posteriors(boundary, skew, kDefaultSpecs);
  CHECK(pb[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pb[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("true_posteriors logistic value at d = -1") {
  const auto p = priorshift::true_posteriors(-1.0, ProbabilityVector({0.5, 0.5}),
                                             kDefaultSpecs);
  const double logistic2 = 1.0 / (1.0 + std::exp(-2.0));
  CHECK(p[0] == doctest::Approx(logistic2).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 - logistic2).epsilon(1e-12));
}

TEST_CASE("run_demo reproduces the expected error rates") {
  const auto report = priorshift::run_demo(12345, 10000,
                                           ProbabilityVector({0.5, 0.5}),
                                           ProbabilityVector({0.8, 0.2}),
                                           kDefaultSpecs);
  CHECK(report.boundary_old == 0.0);
  CHECK(report.boundary_new == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  const double old_target = phi(-1.0);  // = 0.1587
  const double d = std::log(2.0);
  const double adapted_target = 0.8 * phi(-(1.0 + d)) + 0.2 * phi(-(1.0 - d));
  CHECK(std::fabs(report.old_error_rate - old_target) <= 0.012);
  CHECK(std::fabs(report.adapted_error_rate - adapted_target) <= 0.012);
  CHECK(report.adapted_error_rate < report.old_error_rate);
  CHECK(report.boundary_mismatches == 0);

  std::size_t old_err_total = 0;
  std::size_t adapted_err_total = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(report.old_errors[c] <= report.class_counts[c]);
    CHECK(report.adapted_errors[c] <= report.class_counts[c]);
    old_err_total += report.old_errors[c];
    adapted_err_total += report.adapted_errors[c];
  }
  CHECK(report.class_counts[0] + report.class_counts[1] == 10000);
  CHECK(old_err_total == static_cast<std::size_t>(
                             std::lround(report.old_error_rate * 10000)));
  CHECK(adapted_err_total ==
        static_cast<std::size_t>(
            std::lround(report.adapted_error_rate * 10000)));
}

TEST_CASE("run_demo with unchanged priors changes nothing") {
  const ProbabilityVector equal({0.5, 0.5});
  const auto report =
      priorshift::run_demo(99, 5000, equal, equal, kDefaultSpecs);
  CHECK(report.old_error_rate == report.adapted_error_rate);
  for (std::size_t c = 0; c < 2; ++c)
    CHECK(report.old_errors[c] == report.adapted_errors[c]);
  CHECK(report.boundary_new == report.boundary_old);
}

TEST_CASE("run_demo is deterministic per seed") {
  const ProbabilityVector old_p({0.5, 0.5});
  const ProbabilityVector new_p({0.8, 0.2});
  const auto a = priorshift::run_demo(4242, 2000, old_p, new_p, kDefaultSpecs);
  const auto b = priorshift::run_demo(4242, 2000, old_p, new_p, kDefaultSpecs);
  CHECK(a.old_error_rate == b.old_error_rate);
  CHECK(a.adapted_error_rate == b.adapted_error_rate);
  CHECK(a.old_errors == b.old_errors);
  CHECK(a.adapted_errors == b.adapted_errors);
}

TEST_CASE("write_histogram emits one line per bin per class") {
  const auto samples = priorshift::sample_dataset(ProbabilityVector({0.5, 0.5}),
                                                  kDefaultSpecs, 1000, 17);
  const std::string path = "test_histogram.tsv";
  priorshift::write_histogram(path, samples, 2);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::size_t lines = 0;
  std::size_t total_count = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    std::size_t cls, count;
    double bin_left;
    REQUIRE(std::sscanf(line.c_str(), "%zu\t%lf\t%zu", &cls, &bin_left,
                        &count) == 3);
    CHECK(cls < 2);
    CHECK(bin_left >= -5.0);
    CHECK(bin_left < 5.0);
    total_count += count;
  }
  CHECK(lines == 2 * 50);
  CHECK(total_count <= 1000);   // out-of-range samples are dropped
  CHECK(total_count >= 990);    // but nearly all fall inside [-5, 5)
  std::remove(path.c_str());
}
