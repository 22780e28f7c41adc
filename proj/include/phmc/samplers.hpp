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

#ifndef PHMC_SAMPLERS_HPP
#define PHMC_SAMPLERS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phmc/model.hpp"
#include "phmc/particles.hpp"
#include "phmc/random.hpp"
#include "phmc/smc.hpp"
#include "phmc/types.hpp"

namespace phmc {

struct SamplerConfig {
  std::size_t K = 1000;
  std::size_t L = 5;
  double epsilon = 0.05;
  std::size_t N = 100;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  double rw_scale = 0.05;
  RngSeed seed = 0;
  /// Index of this chain; all random streams are keyed by (seed, chain, iteration, role).
  std::uint64_t chain = 0;
  double ess_threshold_fraction = 0.5;
  Resampling resampling = Resampling::kSystematic;
  /// PHMC only: keep the estimate and gradient of the current state from the run that
  /// produced it instead of re-running the filter at theta^(0) every iteration.
  bool reuse_current_loglik = false;
  double divergence_threshold = 1e6;

  void validate() const {
    if (K < 1) throw std::invalid_argument("SamplerConfig: K must be at least 1");
    if (burn_in >= K) throw std::invalid_argument("SamplerConfig: burn_in must be smaller than K");
    if (thin < 1) throw std::invalid_argument("SamplerConfig: thin must be at least 1");
    if (L < 1) throw std::invalid_argument("SamplerConfig: L must be at least 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw std::invalid_argument("SamplerConfig: epsilon must be positive");
    if (N < 1) throw std::invalid_argument("SamplerConfig: N must be at least 1");
    if (!(rw_scale >= 0.0) || !std::isfinite(rw_scale))
      throw std::invalid_argument("SamplerConfig: rw_scale must be non-negative");
  }

  FilterConfig filter() const {
    FilterConfig f;
    f.particles = N;
    f.ess_threshold_fraction = ess_threshold_fraction;
    f.resampling = resampling;
    return f;
  }

  bool keep(std::size_t iteration) const {
    return iteration > burn_in && (iteration - burn_in) % thin == 0;
  }
};

template <class State>
struct Draw {
  std::size_t iteration = 0;
  ParamVector theta;
  Trajectory<State> trajectory;
  double log_z = 0.0;
};

template <class State>
struct ChainOutput {
  std::vector<Draw<State>> draws;
  std::vector<bool> accepted;
  double acceptance_rate = 0.0;
  std::size_t divergences = 0;
  std::size_t degenerate = 0;
  std::size_t out_of_support = 0;

  void finish() {
    std::size_t n = 0;
    for (bool a : accepted) n += a ? 1 : 0;
    acceptance_rate = accepted.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(accepted.size());
  }
};

struct LeapfrogResult {
  std::vector<double> theta;
  std::vector<double> r;
  /// Full-step states, index 0 holding (theta0, r0).
  std::vector<std::vector<double>> theta_trace;
  std::vector<std::vector<double>> r_trace;
};

inline double kinetic_energy(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return 0.5 * s;
}

/// L Stormer-Verlet steps for H = U + r'r/2 with grad = -grad U, starting from a known
/// gradient g0 at theta0.
template <class Grad>
LeapfrogResult leapfrog_from(Grad&& grad, std::span<const double> theta0, std::span<const double> r0,
                             std::vector<double> g0, std::size_t L, double eps) {
  if (L < 1) throw std::invalid_argument("leapfrog: L must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("leapfrog: epsilon must be positive");
  if (theta0.size() != r0.size() || g0.size() != theta0.size())
    throw std::invalid_argument("leapfrog: theta, momentum and gradient sizes differ");
  const std::size_t d = theta0.size();
  LeapfrogResult res;
  res.theta.assign(theta0.begin(), theta0.end());
  res.r.assign(r0.begin(), r0.end());
  res.theta_trace.push_back(res.theta);
  res.r_trace.push_back(res.r);
  std::vector<double> g = std::move(g0);
  for (std::size_t step = 1; step <= L; ++step) {
    for (std::size_t c = 0; c < d; ++c) {
      res.r[c] += 0.5 * eps * g[c];
      res.theta[c] += eps * res.r[c];
    }
    g = grad(std::span<const double>(res.theta));
    if (g.size() != d) throw std::invalid_argument("leapfrog: gradient has the wrong size");
    for (double v : g)
      if (!std::isfinite(v)) throw DivergenceError(step, "non-finite gradient");
    for (std::size_t c = 0; c < d; ++c) res.r[c] += 0.5 * eps * g[c];
    res.theta_trace.push_back(res.theta);
    res.r_trace.push_back(res.r);
  }
  return res;
}

/// `grad` returns the gradient of the log target (the negative force).
template <class Grad>
LeapfrogResult leapfrog(Grad&& grad, std::span<const double> theta0, std::span<const double> r0,
                        std::size_t L, double eps) {
  std::vector<double> g0 = grad(theta0);
  for (double v : g0)
    if (!std::isfinite(v)) throw DivergenceError(0, "non-finite gradient");
  return leapfrog_from(grad, theta0, r0, std::move(g0), L, eps);
}

namespace detail {

inline std::vector<double> draw_momentum(std::size_t d, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> r(d);
  for (double& v : r) v = nd(rng);
  return r;
}

inline bool accept_log(double log_alpha, Rng& rng) {
  if (std::isnan(log_alpha)) return false;
  if (log_alpha >= 0.0) return true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::log(u(rng)) < log_alpha;
}

inline std::vector<std::string> default_names(std::size_t d) {
  std::vector<std::string> n;
  for (std::size_t i = 0; i < d; ++i) n.push_back("theta_" + std::to_string(i + 1));
  return n;
}

}  // namespace detail

/// Reference HMC with identity mass matrix on an exactly evaluable target.
template <class LogPost, class GradLogPost>
ChainOutput<double> hmc(LogPost&& log_post, GradLogPost&& grad_log_post, const SamplerConfig& cfg,
                        std::span<const double> theta_init, std::vector<std::string> names = {}) {
  cfg.validate();
  for (double v : theta_init)
    if (!std::isfinite(v)) throw std::invalid_argument("hmc: initial point is not finite");
  const std::size_t d = theta_init.size();
  if (names.empty()) names = detail::default_names(d);
  ChainOutput<double> out;
  std::vector<double> theta(theta_init.begin(), theta_init.end());
  double lp = log_post(std::span<const double>(theta));
  for (std::size_t k = 1; k <= cfg.K; ++k) {
    Rng mom = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kMomentum)});
    Rng acc = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kAccept)});
    const std::vector<double> r0 = detail::draw_momentum(d, mom);
    bool accepted = false;
    try {
      LeapfrogResult lf = leapfrog(grad_log_post, theta, r0, cfg.L, cfg.epsilon);
      const double lp_new = log_post(std::span<const double>(lf.theta));
      if (std::isfinite(lp_new) && std::abs(lp_new - lp) > cfg.divergence_threshold) {
        ++out.divergences;
      } else {
        const double log_alpha = (lp_new - kinetic_energy(lf.r)) - (lp - kinetic_energy(r0));
        if (detail::accept_log(log_alpha, acc)) {
          theta = std::move(lf.theta);
          lp = lp_new;
          accepted = true;
        }
      }
    } catch (const DivergenceError&) {
      ++out.divergences;
    }
    out.accepted.push_back(accepted);
    if (cfg.keep(k)) out.draws.push_back({k, ParamVector(names, theta), {}, lp});
  }
  out.finish();
  return out;
}

/// Particle marginal Metropolis-Hastings with a Gaussian random-walk proposal.
template <StateSpaceModel M>
ChainOutput<typename M::state_type> pmmh(const M& model, std::span<const typename M::observation_type> y,
                                         const SamplerConfig& cfg, std::span<const double> theta_init) {
  cfg.validate();
  check_dim(theta_init.size(), model.dim(), "pmmh");
  if (!model.in_support(theta_init)) throw std::domain_error("pmmh: initial point outside the support");
  using State = typename M::state_type;
  const std::size_t d = model.dim();
  const std::vector<std::string> names = model.param_names();
  const FilterConfig fcfg = cfg.filter();

  std::vector<double> theta(theta_init.begin(), theta_init.end());
  Rng init_rng = make_stream(cfg.seed, {cfg.chain, 0, key(StreamRole::kInit)});
  FilterResult<State> cur = run_filter(model, theta, y, fcfg, init_rng);
  double log_z = cur.log_z;
  double lp = model.log_prior(theta);
  Trajectory<State> traj = std::move(cur.trajectory);

  ChainOutput<State> out;
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> prop(d);
  for (std::size_t k = 1; k <= cfg.K; ++k) {
    Rng prng = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kProposal)});
    Rng acc = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kAccept)});
    for (std::size_t c = 0; c < d; ++c) prop[c] = theta[c] + cfg.rw_scale * nd(prng);
    bool accepted = false;
    if (!model.in_support(prop)) {
      ++out.out_of_support;
    } else {
      try {
        Rng frng = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kFilterFinal)});
        FilterResult<State> res = run_filter(model, prop, y, fcfg, frng);
        const double lp_new = model.log_prior(prop);
        const double log_alpha = (res.log_z + lp_new) - (log_z + lp);
        if (detail::accept_log(log_alpha, acc)) {
          theta = prop;
          log_z = res.log_z;
          lp = lp_new;
          traj = std::move(res.trajectory);
          accepted = true;
        }
      } catch (const DegenerateFilterError&) {
        ++out.degenerate;
      }
    }
    out.accepted.push_back(accepted);
    if (cfg.keep(k)) out.draws.push_back({k, ParamVector(names, theta), traj, log_z});
  }
  out.finish();
  return out;
}

namespace detail {

struct SupportExit {};

}  // namespace detail

/// Particle HMC: leapfrog driven by particle score estimates, with the particle likelihood
/// estimate in the Hamiltonian. Each iteration runs the filter at theta^(0) and after each
/// of the L position updates; the last run supplies the proposed trajectory and estimate.
template <StateSpaceModel M>
ChainOutput<typename M::state_type> phmc(const M& model, std::span<const typename M::observation_type> y,
                                         const SamplerConfig& cfg, std::span<const double> theta_init,
                                         ScoreKind score_kind = ScoreKind::kQuadratic) {
  cfg.validate();
  check_dim(theta_init.size(), model.dim(), "phmc");
  if (!model.in_support(theta_init)) throw std::domain_error("phmc: initial point outside the support");
  if (score_kind == ScoreKind::kNone) throw std::invalid_argument("phmc: a score estimator is required");
  using State = typename M::state_type;
  const std::size_t d = model.dim();
  const std::vector<std::string> names = model.param_names();
  const FilterConfig fcfg = cfg.filter();

  struct Point {
    std::vector<double> theta;
    double potential = 0.0;
    double log_z = 0.0;
    std::vector<double> grad;
    Trajectory<State> trajectory;
  };
  auto evaluate = [&](std::span<const double> th, Rng& rng) {
    FilterResult<State> res = run_filter(model, th, y, fcfg, rng, score_kind);
    Point p;
    p.theta.assign(th.begin(), th.end());
    p.log_z = res.log_z;
    p.potential = -res.log_z - model.log_prior(th);
    p.grad = std::move(res.score->posterior_grad);
    p.trajectory = std::move(res.trajectory);
    return p;
  };

  Rng init_rng = make_stream(cfg.seed, {cfg.chain, 0, key(StreamRole::kInit)});
  Point cur = evaluate(theta_init, init_rng);

  ChainOutput<State> out;
  for (std::size_t k = 1; k <= cfg.K; ++k) {
    Rng mom = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kMomentum)});
    Rng acc = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kAccept)});
    const std::vector<double> r0 = detail::draw_momentum(d, mom);
    bool accepted = false;
    try {
      Point start;
      if (cfg.reuse_current_loglik) {
        start = cur;
      } else {
        Rng frng = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kFilterStep), 0});
        start = evaluate(cur.theta, frng);
      }
      std::size_t step = 0;
      Point last;
      auto grad = [&](std::span<const double> th) {
        ++step;
        if (!model.in_support(th)) throw detail::SupportExit{};
        Rng frng = make_stream(cfg.seed, {cfg.chain, k, key(StreamRole::kFilterStep), step});
        last = evaluate(th, frng);
        if (!std::isfinite(last.potential) ||
            std::abs(last.potential - start.potential) > cfg.divergence_threshold)
          throw DivergenceError(step, "potential change exceeds the divergence threshold");
        return last.grad;
      };
      LeapfrogResult lf = leapfrog_from(grad, start.theta, r0, start.grad, cfg.L, cfg.epsilon);
      const double h0 = start.potential + kinetic_energy(r0);
      const double h1 = last.potential + kinetic_energy(lf.r);
      if (detail::accept_log(h0 - h1, acc)) {
        cur = std::move(last);
        accepted = true;
      }
    } catch (const detail::SupportExit&) {
      ++out.out_of_support;
    } catch (const DivergenceError&) {
      ++out.divergences;
    } catch (const DegenerateFilterError&) {
      ++out.degenerate;
    } catch (const DegenerateBackwardKernelError&) {
      ++out.degenerate;
    }
    out.accepted.push_back(accepted);
    if (cfg.keep(k)) out.draws.push_back({k, ParamVector(names, cur.theta), cur.trajectory, cur.log_z});
  }
  out.finish();
  return out;
}

}  // namespace phmc

#endif  // PHMC_SAMPLERS_HPP
