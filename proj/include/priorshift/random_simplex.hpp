// priorshift/random_simplex.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef PRIORSHIFT_RANDOM_SIMPLEX_HPP_
#define PRIORSHIFT_RANDOM_SIMPLEX_HPP_

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace priorshift {

/// Uniform draw from the probability simplex (flat Dirichlet) via
/// normalized exponentials.
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    double u;
    do u = unit(rng); while (u <= 0.0);
    x = -std::log(u);
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

/// Simplex draw mixed half-and-half with the uniform vector, so every
/// element is at least 1/(2n). Used for random priors: the second
/// eigenvalue of the adaptation matrix approaches 1 - min(prior), so a
/// floor keeps power iteration within its iteration cap at large n.
inline std::vector<double> random_floored_simplex(std::mt19937_64& rng,
                                                  std::size_t n) {
  std::vector<double> v = random_simplex(rng, n);
  const double uniform = 1.0 / static_cast<double>(n);
  for (double& x : v) x = 0.5 * x + 0.5 * uniform;
  return v;
}

}  // namespace priorshift

#endif  // PRIORSHIFT_RANDOM_SIMPLEX_HPP_
