/*
 * Copyright 2026 The phmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHMC_PRIORS_HPP
#define PHMC_PRIORS_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "phmc/math.hpp"

namespace phmc::priors {

// Log-densities and their derivatives for the scalar priors used by the bundled models.

/// Uniform on the open interval (lo, hi).
struct Uniform {
  double lo, hi;
  bool contains(double x) const { return x > lo && x < hi; }
  double log_pdf(double x) const { return contains(x) ? -std::log(hi - lo) : kNegInf; }
  double grad(double) const { return 0.0; }
  template <class R>
  double sample(R& rng) const {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
};

struct Normal {
  double mean, sd;
  double log_pdf(double x) const { return log_normal_pdf(x, mean, sd); }
  double grad(double x) const { return -(x - mean) / (sd * sd); }
  template <class R>
  double sample(R& rng) const {
    return std::normal_distribution<double>(mean, sd)(rng);
  }
};

/// Gamma(shape, rate) prior on the precision 1/sigma^2, expressed as a density on sigma:
/// p(sigma) = Gamma(sigma^-2; a, b) * 2 sigma^-3.
struct GammaPrecision {
  double shape, rate;
  double log_pdf(double sigma) const {
    if (!(sigma > 0.0)) return kNegInf;
    return shape * std::log(rate) - std::lgamma(shape) + std::numbers::ln2 -
           (2.0 * shape + 1.0) * std::log(sigma) - rate / (sigma * sigma);
  }
  double grad(double sigma) const {
    return -(2.0 * shape + 1.0) / sigma + 2.0 * rate / (sigma * sigma * sigma);
  }
  template <class R>
  double sample(R& rng) const {
    const double precision = std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
    return 1.0 / std::sqrt(precision);
  }
};

}  // namespace phmc::priors

#endif  // PHMC_PRIORS_HPP
