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

#ifndef PHMC_MODEL_HPP
#define PHMC_MODEL_HPP

#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phmc/random.hpp"
#include "phmc/types.hpp"

namespace phmc {

// A state-space model is split in two layers:
//
//  * the model object owns the parameter layout, the prior and the support;
//  * `model.bind(theta)` returns a kernel with every density, sampler and gradient
//    evaluated at that theta (constants such as log(sigma) are computed once).
//
// Density gradients are written in the model's gradient coordinates, of which there
// are `grad_dim()`. When every density depends on theta only through a smaller set of
// quantities (the LGSSM drift depends on the kappas only through their mean) the
// gradient coordinates are those quantities, and `expand_grad` applies the chain rule
// to produce the d_theta-dimensional gradient. Otherwise grad_dim() == dim() and
// expand_grad is the identity.

template <class K, class State, class Obs>
concept ModelKernel = requires(const K& k, const State& h, const State& hp, const Obs& y,
                               Rng& rng, std::span<double> out) {
  { k.log_init(h) } -> std::convertible_to<double>;
  { k.log_trans(h, hp) } -> std::convertible_to<double>;
  { k.log_obs(y, h) } -> std::convertible_to<double>;
  { k.sample_init(rng) } -> std::convertible_to<State>;
  { k.sample_trans(hp, rng) } -> std::convertible_to<State>;
  { k.sample_obs(h, rng) } -> std::convertible_to<Obs>;
  k.grad_log_init(h, out);
  k.grad_log_trans(h, hp, out);
  k.grad_log_obs(y, h, out);
};

template <class M>
concept StateSpaceModel = requires(const M& m, std::span<const double> theta,
                                   std::span<const double> compact, std::span<double> out) {
  typename M::state_type;
  typename M::observation_type;
  { m.dim() } -> std::convertible_to<std::size_t>;
  { m.grad_dim() } -> std::convertible_to<std::size_t>;
  { m.param_names() } -> std::convertible_to<std::vector<std::string>>;
  { m.in_support(theta) } -> std::convertible_to<bool>;
  { m.log_prior(theta) } -> std::convertible_to<double>;
  m.grad_log_prior(theta, out);
  m.expand_grad(theta, compact, out);
  { m.bind(theta) } -> ModelKernel<typename M::state_type, typename M::observation_type>;
};

/// Transition of the form h_t ~ N(coef * h_{t-1} + offset, sd^2), with the gradients of
/// coef, offset and sd in gradient coordinates.
struct LinearGaussianTransition {
  double coef = 0.0;
  double offset = 0.0;
  double sd = 1.0;
  std::vector<double> d_coef;
  std::vector<double> d_offset;
  std::vector<double> d_sd;
};

/// Kernels that expose their transition in linear-Gaussian form get the vectorized
/// backward-kernel sweep in the O(N^2) score estimator.
template <class K>
concept HasLinearGaussianTransition = requires(const K& k) {
  { k.linear_gaussian_transition() } -> std::convertible_to<LinearGaussianTransition>;
};

template <StateSpaceModel M>
using KernelOf = decltype(std::declval<const M&>().bind(std::span<const double>{}));

inline void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                " parameter components, got " + std::to_string(got));
}

template <StateSpaceModel M>
ParamVector make_params(const M& model, std::vector<double> values) {
  return ParamVector(model.param_names(), std::move(values));
}

// Full d_theta-dimensional gradients of the individual log-densities.

template <StateSpaceModel M>
std::vector<double> grad_log_init(const M& model, std::span<const double> theta,
                                  const typename M::state_type& h) {
  check_dim(theta.size(), model.dim(), "grad_log_init");
  std::vector<double> compact(model.grad_dim()), full(model.dim());
  model.bind(theta).grad_log_init(h, compact);
  model.expand_grad(theta, compact, full);
  return full;
}

template <StateSpaceModel M>
std::vector<double> grad_log_trans(const M& model, std::span<const double> theta,
                                   const typename M::state_type& h,
                                   const typename M::state_type& h_prev) {
  check_dim(theta.size(), model.dim(), "grad_log_trans");
  std::vector<double> compact(model.grad_dim()), full(model.dim());
  model.bind(theta).grad_log_trans(h, h_prev, compact);
  model.expand_grad(theta, compact, full);
  return full;
}

template <StateSpaceModel M>
std::vector<double> grad_log_obs(const M& model, std::span<const double> theta,
                                 const typename M::observation_type& y,
                                 const typename M::state_type& h) {
  check_dim(theta.size(), model.dim(), "grad_log_obs");
  std::vector<double> compact(model.grad_dim()), full(model.dim());
  model.bind(theta).grad_log_obs(y, h, compact);
  model.expand_grad(theta, compact, full);
  return full;
}

template <StateSpaceModel M>
std::vector<double> grad_log_prior(const M& model, std::span<const double> theta) {
  check_dim(theta.size(), model.dim(), "grad_log_prior");
  std::vector<double> out(model.dim());
  model.grad_log_prior(theta, out);
  return out;
}

/// log p(y_{1:T}, h_{1:T} | theta).
template <StateSpaceModel M>
double log_joint(const M& model, std::span<const double> theta,
                 std::span<const typename M::observation_type> y,
                 std::span<const typename M::state_type> h) {
  if (y.size() != h.size() || y.empty())
    throw std::invalid_argument("log_joint: observation and state lengths differ or are zero");
  const auto k = model.bind(theta);
  double s = k.log_init(h[0]) + k.log_obs(y[0], h[0]);
  for (std::size_t t = 1; t < y.size(); ++t) s += k.log_trans(h[t], h[t - 1]) + k.log_obs(y[t], h[t]);
  return s;
}

template <class State, class Obs>
struct SimulatedData {
  Trajectory<State> states;
  ObservationSeries<Obs> observations;
};

/// Ancestral sampling of (h_{1:T}, y_{1:T}); deterministic given the seed.
template <StateSpaceModel M>
SimulatedData<typename M::state_type, typename M::observation_type> simulate_dataset(
    const M& model, std::span<const double> theta, std::size_t T, RngSeed seed) {
  check_dim(theta.size(), model.dim(), "simulate_dataset");
  if (T < 1) throw std::invalid_argument("simulate_dataset: T must be at least 1");
  if (!model.in_support(theta))
    throw std::domain_error("simulate_dataset: parameters outside the model support");
  Rng rng(seed);
  const auto k = model.bind(theta);
  SimulatedData<typename M::state_type, typename M::observation_type> out;
  out.states.reserve(T);
  out.observations.reserve(T);
  out.states.push_back(k.sample_init(rng));
  for (std::size_t t = 1; t < T; ++t) out.states.push_back(k.sample_trans(out.states.back(), rng));
  for (std::size_t t = 0; t < T; ++t) out.observations.push_back(k.sample_obs(out.states[t], rng));
  return out;
}

}  // namespace phmc

#endif  // PHMC_MODEL_HPP
