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

#ifndef PHMC_SMC_HPP
#define PHMC_SMC_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "phmc/gradients.hpp"
#include "phmc/math.hpp"
#include "phmc/model.hpp"
#include "phmc/particles.hpp"
#include "phmc/random.hpp"
#include "phmc/types.hpp"

namespace phmc {

template <class State>
struct FilterResult {
  double log_z = 0.0;
  Trajectory<State> trajectory;
  ParticleSystem<State> system;
  std::optional<ScoreEstimate> score;
};

/// Draws one trajectory by sampling a final particle from W_T and tracing its ancestors.
template <class State>
Trajectory<State> trace_trajectory(const ParticleSystem<State>& sys, Rng& rng) {
  const auto W = sys.weights_at(sys.T - 1);
  std::discrete_distribution<std::size_t> pick(W.begin(), W.end());
  std::size_t b = pick(rng);
  Trajectory<State> out(sys.T);
  for (std::size_t t = sys.T; t-- > 0;) {
    out[t] = sys.particles_at(t)[b];
    if (t > 0) b = sys.ancestors_at(t)[b];
  }
  return out;
}

/// Bootstrap particle filter with ESS-triggered resampling. Returns the log of the
/// unbiased likelihood estimate, one trajectory drawn from the particle approximation,
/// the full particle system and, on request, a score estimate.
template <StateSpaceModel M>
FilterResult<typename M::state_type> run_filter(const M& model, std::span<const double> theta,
                                                std::span<const typename M::observation_type> y,
                                                const FilterConfig& cfg, Rng& rng,
                                                ScoreKind want_score = ScoreKind::kNone) {
  using State = typename M::state_type;
  cfg.validate();
  check_dim(theta.size(), model.dim(), "run_filter");
  if (y.empty()) throw std::invalid_argument("run_filter: empty observation series");
  if (!model.in_support(theta)) throw std::domain_error("run_filter: parameters outside the model support");

  const std::size_t T = y.size();
  const std::size_t N = cfg.particles;
  const double threshold = cfg.ess_threshold_fraction * static_cast<double>(N);
  const auto k = model.bind(theta);

  FilterResult<State> res;
  ParticleSystem<State>& sys = res.system;
  sys = ParticleSystem<State>(T, N);

  auto weigh = [&](std::size_t t) {
    auto lw = sys.log_weights_at(t);
    for (double& v : lw)
      if (std::isnan(v)) v = kNegInf;
    if (normalize_log_weights(lw, sys.weights_at(t)) == kNegInf) throw DegenerateFilterError(t);
    double sq = 0.0;
    for (double w : sys.weights_at(t)) sq += w * w;
    sys.ess[t] = 1.0 / sq;
  };

  {
    auto h = sys.particles_at(0);
    auto lw = sys.log_weights_at(0);
    auto a = sys.ancestors_at(0);
    for (std::size_t i = 0; i < N; ++i) {
      h[i] = k.sample_init(rng);
      lw[i] = k.log_obs(y[0], h[i]);
      a[i] = i;
    }
    weigh(0);
  }

  std::vector<std::size_t> idx;
  for (std::size_t t = 1; t < T; ++t) {
    const bool do_resample = sys.ess[t - 1] <= threshold;
    sys.resampled[t] = do_resample;
    auto a = sys.ancestors_at(t);
    if (do_resample) {
      idx = resample(sys.weights_at(t - 1), N, cfg.resampling, rng);
      std::copy(idx.begin(), idx.end(), a.begin());
    } else {
      std::iota(a.begin(), a.end(), std::size_t{0});
    }
    const auto hp = sys.particles_at(t - 1);
    const auto lwp = sys.log_weights_at(t - 1);
    auto h = sys.particles_at(t);
    auto lw = sys.log_weights_at(t);
    for (std::size_t i = 0; i < N; ++i) {
      h[i] = k.sample_trans(hp[a[i]], rng);
      lw[i] = k.log_obs(y[t], h[i]) + (do_resample ? 0.0 : lwp[i]);
    }
    weigh(t);
  }

  const std::vector<double> inc = log_marginal_increments(sys);
  res.log_z = 0.0;
  for (double v : inc) res.log_z += v;
  res.trajectory = trace_trajectory(sys, rng);

  if (want_score == ScoreKind::kLinear)
    res.score = score_linear(model, theta, sys, y);
  else if (want_score == ScoreKind::kQuadratic)
    res.score = score_quadratic(model, theta, sys, y);
  return res;
}

}  // namespace phmc

#endif  // PHMC_SMC_HPP
