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

#ifndef PHMC_PARTICLES_HPP
#define PHMC_PARTICLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phmc/math.hpp"
#include "phmc/random.hpp"

namespace phmc {

enum class Resampling { kSystematic, kStratified, kMultinomial };
enum class Proposal { kBootstrap };
enum class ScoreKind { kNone, kLinear, kQuadratic };

struct FilterConfig {
  std::size_t particles = 100;
  /// Resample at step t when ESS(W_{t-1}) <= fraction * N.
  double ess_threshold_fraction = 0.5;
  Resampling resampling = Resampling::kSystematic;
  Proposal proposal = Proposal::kBootstrap;

  void validate() const {
    if (particles < 1) throw std::invalid_argument("FilterConfig: need at least one particle");
    if (!(ess_threshold_fraction > 0.0 && ess_threshold_fraction <= 1.0))
      throw std::invalid_argument("FilterConfig: ess_threshold_fraction must lie in (0, 1]");
  }
};

/// Full particle history of one filter run, stored time-major (row t holds N entries).
/// ancestors(t) are the a_t indices used to propagate into time t; row 0 is the identity.
template <class State>
struct ParticleSystem {
  std::size_t T = 0;
  std::size_t N = 0;
  std::vector<State> particles;
  std::vector<double> log_weights;
  std::vector<double> weights;
  std::vector<std::size_t> ancestors;
  std::vector<bool> resampled;
  std::vector<double> ess;

  ParticleSystem() = default;
  ParticleSystem(std::size_t T_, std::size_t N_)
      : T(T_), N(N_), particles(T_ * N_), log_weights(T_ * N_), weights(T_ * N_),
        ancestors(T_ * N_), resampled(T_, false), ess(T_, 0.0) {}

  std::span<State> particles_at(std::size_t t) { return {particles.data() + t * N, N}; }
  std::span<const State> particles_at(std::size_t t) const { return {particles.data() + t * N, N}; }
  std::span<double> log_weights_at(std::size_t t) { return {log_weights.data() + t * N, N}; }
  std::span<const double> log_weights_at(std::size_t t) const { return {log_weights.data() + t * N, N}; }
  std::span<double> weights_at(std::size_t t) { return {weights.data() + t * N, N}; }
  std::span<const double> weights_at(std::size_t t) const { return {weights.data() + t * N, N}; }
  std::span<std::size_t> ancestors_at(std::size_t t) { return {ancestors.data() + t * N, N}; }
  std::span<const std::size_t> ancestors_at(std::size_t t) const { return {ancestors.data() + t * N, N}; }
};

/// Effective sample size 1 / sum W_i^2 of normalized weights.
inline double ess(std::span<const double> W) {
  double sum = 0.0, sq = 0.0;
  for (double w : W) {
    sum += w;
    sq += w * w;
  }
  if (W.empty() || !(std::abs(sum - 1.0) <= 1e-9))
    throw std::invalid_argument("ess: weights are not normalized (sum=" + std::to_string(sum) + ")");
  return 1.0 / sq;
}

namespace detail {

inline void check_resampling_weights(std::span<const double> W) {
  if (W.empty()) throw std::invalid_argument("resample: empty weight vector");
  for (double w : W)
    if (std::isnan(w) || w < 0.0) throw std::invalid_argument("resample: weights must be non-negative numbers");
}

// Maps sorted points in [0, scale) to indices through the cumulative weights times scale.
// Working in units of 1/n keeps the bin edges of uniform weights exact.
inline std::vector<std::size_t> invert_cdf(std::span<const double> W, std::span<const double> points,
                                           double scale) {
  std::size_t last = W.size() - 1;
  while (last > 0 && W[last] == 0.0) --last;
  std::vector<std::size_t> out(points.size());
  std::size_t i = 0;
  double cum = scale * W[0];
  for (std::size_t k = 0; k < points.size(); ++k) {
    while (points[k] >= cum && i < last) cum += scale * W[++i];
    out[k] = i;
  }
  return out;
}

}  // namespace detail

/// Systematic resampling with an explicit offset u in [0, 1/n): points u + k/n.
inline std::vector<std::size_t> systematic_resample(std::span<const double> W, std::size_t n, double u) {
  detail::check_resampling_weights(W);
  std::vector<double> points(n);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) points[k] = nd * u + static_cast<double>(k);
  return detail::invert_cdf(W, points, nd);
}

/// Stratified resampling with one uniform in [0, 1) per stratum: points (k + u_k)/n.
inline std::vector<std::size_t> stratified_resample(std::span<const double> W,
                                                    std::span<const double> uniforms) {
  detail::check_resampling_weights(W);
  const std::size_t n = uniforms.size();
  std::vector<double> points(n);
  for (std::size_t k = 0; k < n; ++k) points[k] = static_cast<double>(k) + uniforms[k];
  return detail::invert_cdf(W, points, static_cast<double>(n));
}

/// Multinomial resampling from n i.i.d. uniforms in [0, 1).
inline std::vector<std::size_t> multinomial_resample(std::span<const double> W,
                                                     std::span<const double> uniforms) {
  detail::check_resampling_weights(W);
  std::vector<double> points(uniforms.begin(), uniforms.end());
  std::sort(points.begin(), points.end());
  return detail::invert_cdf(W, points, 1.0);
}

inline std::vector<std::size_t> resample(std::span<const double> W, std::size_t n, Resampling scheme,
                                         Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (scheme) {
    case Resampling::kSystematic:
      return systematic_resample(W, n, unif(rng) / static_cast<double>(n));
    case Resampling::kStratified:
    case Resampling::kMultinomial: {
      std::vector<double> u(n);
      for (double& v : u) v = unif(rng);
      return scheme == Resampling::kStratified ? stratified_resample(W, u) : multinomial_resample(W, u);
    }
  }
  throw std::invalid_argument("resample: unknown scheme");
}

/// Per-step log likelihood increments log l_t. l_1 is the mean first-step weight; later
/// steps use the mean weight after resampling, or the ratio of weight sums otherwise.
template <class State>
std::vector<double> log_marginal_increments(const ParticleSystem<State>& sys) {
  std::vector<double> out(sys.T);
  const double log_n = std::log(static_cast<double>(sys.N));
  double prev_lse = 0.0;
  for (std::size_t t = 0; t < sys.T; ++t) {
    const double lse = log_sum_exp(sys.log_weights_at(t));
    out[t] = (t == 0 || sys.resampled[t]) ? lse - log_n : lse - prev_lse;
    prev_lse = lse;
  }
  return out;
}

struct ScoreEstimate {
  std::vector<double> score;
  std::vector<double> posterior_grad;
  ScoreKind kind = ScoreKind::kNone;
};

}  // namespace phmc

#endif  // PHMC_PARTICLES_HPP
