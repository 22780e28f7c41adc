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

#ifndef PHMC_DIAGNOSTICS_HPP
#define PHMC_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phmc/math.hpp"
#include "phmc/samplers.hpp"
#include "phmc/types.hpp"

namespace phmc {

/// Exact log p(y_{1:T}) of the linear-Gaussian model with theta laid out as
/// (kappa_1..kappa_d, sigma_y, sigma_h, rho).
inline double kalman_log_likelihood(std::span<const double> theta, std::span<const double> y, std::size_t d) {
  if (d < 1 || theta.size() != d + 3)
    throw std::invalid_argument("kalman_log_likelihood: theta must hold d + 3 components");
  if (y.empty()) throw std::invalid_argument("kalman_log_likelihood: empty observation series");
  double mu = 0.0;
  for (std::size_t i = 0; i < d; ++i) mu += theta[i];
  mu /= static_cast<double>(d);
  const double sy = theta[d], sh = theta[d + 1], rho = theta[d + 2];
  if (!(std::abs(rho) < 1.0)) throw std::domain_error("kalman_log_likelihood: |rho| must be below 1");
  if (!(sy > 0.0) || !(sh > 0.0)) throw std::domain_error("kalman_log_likelihood: scales must be positive");
  double m = 0.0;
  double P = sh * sh / (1.0 - rho * rho);
  double ll = 0.0;
  for (double yt : y) {
    const double S = P + sy * sy;
    const double e = yt - m;
    ll += -0.5 * (std::log(2.0 * std::numbers::pi * S) + e * e / S);
    const double gain = P / S;
    m += gain * e;
    P *= (1.0 - gain);
    m = mu + rho * m;
    P = rho * rho * P + sh * sh;
  }
  return ll;
}

/// Central differences of f at theta, one component at a time.
template <class F>
std::vector<double> finite_difference_score(F&& f, std::span<const double> theta, double delta = 1e-5) {
  if (!(delta > 0.0)) throw std::invalid_argument("finite_difference_score: delta must be positive");
  std::vector<double> x(theta.begin(), theta.end()), g(theta.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + delta;
    const double fp = f(std::span<const double>(x));
    x[i] = x0 - delta;
    const double fm = f(std::span<const double>(x));
    x[i] = x0;
    g[i] = (fp - fm) / (2.0 * delta);
  }
  return g;
}

/// Sample autocorrelation (1/n normalization) at lags 0..max_lag.
inline std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n <= max_lag) throw std::invalid_argument("acf: series shorter than max_lag + 1");
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) throw UndefinedAcfError();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> out(max_lag + 1);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0.0)) throw UndefinedAcfError();
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double c = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) c += (x[t] - mean) * (x[t + k] - mean);
    out[k] = c / c0;
  }
  return out;
}

/// Type-7 (linear interpolation) quantile of unsorted data.
inline double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
  std::sort(x.begin(), x.end());
  const double h = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  /// Empty when the kept draws are constant.
  std::vector<double> acf;
};

struct ChainSummary {
  std::vector<ParameterSummary> parameters;
  double acceptance_rate = 0.0;
  std::size_t draws = 0;
};

struct LatentSummary {
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
};

inline ParameterSummary summarize_series(std::string name, const std::vector<double>& x, std::size_t max_lag) {
  if (x.empty()) throw std::invalid_argument("summarize_series: empty series");
  ParameterSummary s;
  s.name = std::move(name);
  const double n = static_cast<double>(x.size());
  for (double v : x) s.mean += v;
  s.mean /= n;
  // Rounding in the mean of identical values must not push it outside the sample range.
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  s.mean = std::clamp(s.mean, *mn, *mx);
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  s.q025 = quantile(x, 0.025);
  s.q50 = quantile(x, 0.5);
  s.q975 = quantile(x, 0.975);
  try {
    s.acf = acf(x, std::min(max_lag, x.size() - 1));
  } catch (const UndefinedAcfError&) {
    s.acf.clear();
  }
  return s;
}

template <class State>
ChainSummary summarize_chain(const ChainOutput<State>& out, std::size_t max_lag) {
  if (out.draws.empty()) throw std::invalid_argument("summarize_chain: no kept draws");
  ChainSummary s;
  s.acceptance_rate = out.acceptance_rate;
  s.draws = out.draws.size();
  const auto& names = out.draws.front().theta.names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<double> x;
    x.reserve(out.draws.size());
    for (const auto& dr : out.draws) x.push_back(dr.theta[c]);
    s.parameters.push_back(summarize_series(names[c], x, max_lag));
  }
  return s;
}

/// Per-time mean and empirical 2.5%/97.5% quantiles over the kept trajectories.
template <class State>
LatentSummary summarize_latents(const ChainOutput<State>& out) {
  if (out.draws.empty()) throw std::invalid_argument("summarize_latents: no kept draws");
  const std::size_t T = out.draws.front().trajectory.size();
  if (T == 0) throw std::invalid_argument("summarize_latents: draws carry no trajectories");
  LatentSummary s;
  std::vector<double> x(out.draws.size());
  for (std::size_t t = 0; t < T; ++t) {
    double mean = 0.0;
    for (std::size_t i = 0; i < out.draws.size(); ++i) {
      x[i] = static_cast<double>(out.draws[i].trajectory.at(t));
      mean += x[i];
    }
    mean /= static_cast<double>(x.size());
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    s.lower.push_back(quantile(x, 0.025));
    s.upper.push_back(quantile(x, 0.975));
    s.mean.push_back(std::clamp(mean, *mn, *mx));
  }
  return s;
}

}  // namespace phmc

#endif  // PHMC_DIAGNOSTICS_HPP
