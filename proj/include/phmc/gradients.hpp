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

#ifndef PHMC_GRADIENTS_HPP
#define PHMC_GRADIENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "phmc/math.hpp"
#include "phmc/model.hpp"
#include "phmc/particles.hpp"
#include "phmc/types.hpp"

namespace phmc {

/// Per-particle gradient statistics, one row of `dim` gradient coordinates per particle.
struct PathGradientTable {
  std::size_t particles = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  PathGradientTable() = default;
  PathGradientTable(std::size_t n, std::size_t d) : particles(n), dim(d), values(n * d, 0.0) {}

  std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

namespace detail {

template <StateSpaceModel M>
void check_system(const M& model, std::span<const double> theta, std::size_t T_sys,
                  std::size_t T_obs, const char* what) {
  check_dim(theta.size(), model.dim(), what);
  if (T_sys != T_obs || T_sys == 0)
    throw std::invalid_argument(std::string(what) + ": particle system has " + std::to_string(T_sys) +
                                " steps but there are " + std::to_string(T_obs) + " observations");
}

template <class Kernel, class State, class Obs>
PathGradientTable initial_gradients(const Kernel& k, std::span<const State> h, const Obs& y,
                                    std::size_t gd) {
  PathGradientTable g(h.size(), gd);
  std::vector<double> tmp(gd);
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto row = g.row(i);
    k.grad_log_init(h[i], row);
    k.grad_log_obs(y, h[i], tmp);
    for (std::size_t c = 0; c < gd; ++c) row[c] += tmp[c];
  }
  return g;
}

template <StateSpaceModel M>
ScoreEstimate finish_score(const M& model, std::span<const double> theta, std::span<const double> W,
                           const PathGradientTable& g, ScoreKind kind) {
  std::vector<double> compact(g.dim, 0.0);
  for (std::size_t i = 0; i < g.particles; ++i) {
    if (W[i] == 0.0) continue;
    const auto row = g.row(i);
    for (std::size_t c = 0; c < g.dim; ++c) compact[c] += W[i] * row[c];
  }
  ScoreEstimate out;
  out.kind = kind;
  out.score.assign(model.dim(), 0.0);
  model.expand_grad(theta, compact, out.score);
  out.posterior_grad.assign(model.dim(), 0.0);
  model.grad_log_prior(theta, out.posterior_grad);
  for (std::size_t c = 0; c < model.dim(); ++c) out.posterior_grad[c] += out.score[c];
  return out;
}

}  // namespace detail

/// O(N) estimate: gradients accumulated along each particle's ancestral path, averaged
/// under the final weights.
template <StateSpaceModel M>
ScoreEstimate score_linear(const M& model, std::span<const double> theta,
                           const ParticleSystem<typename M::state_type>& sys,
                           std::span<const typename M::observation_type> y) {
  detail::check_system(model, theta, sys.T, y.size(), "score_linear");
  const auto k = model.bind(theta);
  const std::size_t gd = model.grad_dim();
  const std::size_t N = sys.N;
  PathGradientTable g = detail::initial_gradients(k, sys.particles_at(0), y[0], gd);
  PathGradientTable next(N, gd);
  std::vector<double> tmp(gd);
  for (std::size_t t = 1; t < sys.T; ++t) {
    const auto h = sys.particles_at(t);
    const auto hp = sys.particles_at(t - 1);
    const auto a = sys.ancestors_at(t);
    for (std::size_t i = 0; i < N; ++i) {
      auto row = next.row(i);
      k.grad_log_obs(y[t], h[i], row);
      k.grad_log_trans(h[i], hp[a[i]], tmp);
      const auto prev = g.row(a[i]);
      for (std::size_t c = 0; c < gd; ++c) row[c] += tmp[c] + prev[c];
    }
    std::swap(g, next);
  }
  return detail::finish_score(model, theta, sys.weights_at(sys.T - 1), g, ScoreKind::kLinear);
}

/// Weights the previous-step particles carry into the backward kernel at step t: the
/// ancestor multiplicities over N when the filter resampled, W_{t-1} otherwise.
template <class State>
std::vector<double> backward_prior_weights(const ParticleSystem<State>& sys, std::size_t t) {
  if (t == 0 || t >= sys.T) throw std::out_of_range("backward_prior_weights: t out of range");
  if (!sys.resampled[t]) {
    const auto w = sys.weights_at(t - 1);
    return {w.begin(), w.end()};
  }
  std::vector<double> out(sys.N, 0.0);
  const double inc = 1.0 / static_cast<double>(sys.N);
  for (std::size_t a : sys.ancestors_at(t)) out[a] += inc;
  return out;
}

namespace detail {

// Backward-kernel sweep for one new particle, done exactly in the log domain.
template <class Kernel, class State>
void backward_row_generic(const Kernel& k, std::span<const State> hp, std::span<const double> log_prev,
                          std::span<const std::size_t> active, const PathGradientTable& g_prev,
                          const State& hj, std::span<double> out, std::vector<double>& terms,
                          std::vector<double>& tmp, std::size_t t, std::size_t j) {
  const std::size_t gd = g_prev.dim;
  terms.resize(active.size());
  for (std::size_t m = 0; m < active.size(); ++m) {
    const double v = log_prev[m] + k.log_trans(hj, hp[active[m]]);
    terms[m] = std::isnan(v) ? kNegInf : v;
  }
  const double lse = log_sum_exp(terms);
  if (!(lse > kNegInf) || !std::isfinite(lse)) throw DegenerateBackwardKernelError(t, j);
  for (std::size_t m = 0; m < active.size(); ++m) {
    if (!(terms[m] > kNegInf)) continue;
    const double v = std::exp(terms[m] - lse);
    if (v == 0.0) continue;
    k.grad_log_trans(hj, hp[active[m]], tmp);
    const auto prev = g_prev.row(active[m]);
    for (std::size_t c = 0; c < gd; ++c) out[c] += v * (prev[c] + tmp[c]);
  }
}

}  // namespace detail

/// How the backward-kernel sums of the O(N^2) estimator are evaluated.
///  kGeneric:      exact log-sum-exp over model log_trans / grad_log_trans, any model.
///  kDirect:       all pairs with a vectorized exp (linear-Gaussian transitions).
///  kInterpolated: the Gaussian kernel is interpolated on Chebyshev nodes in both the
///                 source and the target variable, so the pairwise work shrinks to
///                 node-to-node evaluations (error ~1e-12 relative to the total weight);
///                 rows with little kernel mass are recomputed directly.
///  kAuto:         kInterpolated when it is cheaper, else kDirect; kGeneric when the
///                 transition is not linear-Gaussian.
enum class BackwardSweep { kAuto, kInterpolated, kDirect, kGeneric };

namespace detail {

// Rows whose interpolated mass is below this fraction of the total weight are redone directly.
inline constexpr double kChebMinMass = 1e-4;

// Direct all-pairs sums for one new particle:
//   e_m = w_m exp(-(x - a hp_m)^2 / 2s^2), sums of e, e z, e z^2, e z hp and e g_c.
inline void direct_sums(double x, double a, double half_prec, const double* hp, const double* lw,
                        const double* gcol, std::size_t na, std::size_t gd, double* e, double* sums) {
  double s0 = 0.0, sz = 0.0, sz2 = 0.0, szh = 0.0;
#pragma omp simd reduction(+ : s0, sz, sz2, szh)
  for (std::size_t m = 0; m < na; ++m) {
    const double zm = x - a * hp[m];
    const double em = exp_fast(lw[m] - half_prec * zm * zm);
    e[m] = em;
    const double ez = em * zm;
    s0 += em;
    sz += ez;
    sz2 += ez * zm;
    szh += ez * hp[m];
  }
  sums[0] = s0;
  sums[1] = sz;
  sums[2] = sz2;
  sums[3] = szh;
  for (std::size_t c = 0; c < gd; ++c) {
    const double* gc = gcol + c * na;
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t m = 0; m < na; ++m) acc += e[m] * gc[m];
    sums[4 + c] = acc;
  }
}

// Piecewise Chebyshev grid over [lo, hi]. Boxes are at most 2 kernel widths wide and a
// box w widths wide carries ceil(4 w + 11) first-kind nodes, which interpolates the
// Gaussian kernel and its first two moments to about 1e-13.
class ChebyshevGrid {
 public:
  static constexpr double kMaxBoxWidth = 2.0;

  ChebyshevGrid(double lo, double hi, double scale) : lo_(lo) {
    const double boxes = std::max(1.0, std::ceil((hi - lo) / (kMaxBoxWidth * scale)));
    boxes_ = boxes < 1e6 ? static_cast<std::size_t>(boxes) : std::size_t{1000000};
    width_ = hi > lo ? (hi - lo) / static_cast<double>(boxes_) : scale;
    per_box_ = static_cast<std::size_t>(std::ceil(4.0 * std::min(width_ / scale, kMaxBoxWidth) + 11.0));
  }

  std::size_t nodes() const { return boxes_ * per_box_; }
  std::size_t per_box() const { return per_box_; }

  void build() {
    const std::size_t p = per_box_;
    std::vector<double> ref(p);
    lambda_.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
      const double ang = (2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi / (2.0 * static_cast<double>(p));
      ref[k] = std::cos(ang);
      lambda_[k] = ((k % 2) ? -1.0 : 1.0) * std::sin(ang);
    }
    position_.resize(nodes());
    for (std::size_t b = 0; b < boxes_; ++b)
      for (std::size_t k = 0; k < p; ++k)
        position_[b * p + k] = lo_ + width_ * (static_cast<double>(b) + 0.5 + 0.5 * ref[k]);
  }

  const std::vector<double>& positions() const { return position_; }

  /// Lagrange basis of u over its box (per_box() values); returns the box's first node.
  std::size_t basis(double u, double* out) const {
    const std::size_t p = per_box_;
    const double rel = (u - lo_) / width_;
    const std::size_t b = rel <= 0.0 ? 0 : std::min(boxes_ - 1, static_cast<std::size_t>(rel));
    const double* pos = position_.data() + b * p;
    const double* lam = lambda_.data();
    double denom = 0.0;
    std::size_t hits = 0;
#pragma omp simd reduction(+ : denom, hits)
    for (std::size_t k = 0; k < p; ++k) {
      const double diff = u - pos[k];
      hits += diff == 0.0 ? 1 : 0;
      out[k] = lam[k] / diff;
      denom += out[k];
    }
    if (hits) {
      for (std::size_t k = 0; k < p; ++k) out[k] = u == pos[k] ? 1.0 : 0.0;
    } else {
      const double inv = 1.0 / denom;
      for (std::size_t k = 0; k < p; ++k) out[k] *= inv;
    }
    return b * p;
  }

 private:
  double lo_ = 0.0;
  double width_ = 1.0;
  std::size_t boxes_ = 1;
  std::size_t per_box_ = 0;
  std::vector<double> position_;
  std::vector<double> lambda_;
};

inline std::pair<double, double> minmax_scaled(const std::vector<double>& v, double a, double shift) {
  double lo = a * v[0] + shift, hi = lo;
  for (double x : v) {
    lo = std::min(lo, a * x + shift);
    hi = std::max(hi, a * x + shift);
  }
  return {lo, hi};
}

// Two-sided interpolated evaluation of the backward-kernel sums. Sources u_m = a hp_m
// are spread onto source nodes (moments of w, w hp and w g_c); the kernel and its z, z^2
// moments are evaluated between source and target nodes; target values are interpolated.
// Output per target: 4 + gd sums in the layout of direct_sums.
class InterpolatedSweep {
 public:
  InterpolatedSweep(double a, double s, const std::vector<double>& hp,
                    std::size_t gd, const std::vector<double>& x)
      : src_(make_grid(hp, a, s)), tgt_(make_grid(x, 1.0, s)), gd_(gd) {}

  static std::size_t round_up(std::size_t c) { return (c + kLanes - 1) / kLanes * kLanes; }

  // dst[k][c] += basis[k] * q[c]
  static void spread(const double* basis, std::size_t p, const double* q, std::size_t width, double* dst) {
    if (width == kLanes) {
      for (std::size_t k = 0; k < p; ++k) {
        const double bk = basis[k];
        double* d = dst + k * kLanes;
#pragma omp simd
        for (std::size_t c = 0; c < kLanes; ++c) d[c] += bk * q[c];
      }
      return;
    }
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t c = 0; c < width; ++c) dst[k * width + c] += basis[k] * q[c];
  }

  // acc[c] = sum_k basis[k] * src[k][c]
  static void gather(const double* basis, std::size_t p, const double* src, std::size_t width, double* acc) {
    if (width == kLanes) {
      double r[kLanes] = {};
      for (std::size_t k = 0; k < p; ++k) {
        const double bk = basis[k];
        const double* v = src + k * kLanes;
#pragma omp simd
        for (std::size_t c = 0; c < kLanes; ++c) r[c] += bk * v[c];
      }
      std::copy_n(r, kLanes, acc);
      return;
    }
    std::fill_n(acc, width, 0.0);
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t c = 0; c < width; ++c) acc[c] += basis[k] * src[k * width + c];
  }

  static ChebyshevGrid make_grid(const std::vector<double>& v, double a, double s) {
    const auto [lo, hi] = minmax_scaled(v, a, 0.0);
    return ChebyshevGrid(lo, hi, s);
  }

  std::size_t source_nodes() const { return src_.nodes(); }
  std::size_t target_nodes() const { return tgt_.nodes(); }

  // Channels are stored node-major and padded to kLanes so the per-point loops are
  // one vector update per node.
  static constexpr std::size_t kLanes = 8;

  void run(double a, double s, const std::vector<double>& hp, const std::vector<double>& w,
           const std::vector<double>& gcol, const std::vector<double>& x, std::vector<double>& out) {
    src_.build();
    tgt_.build();
    const std::size_t na = hp.size(), N = x.size(), gd = gd_;
    const std::size_t ns = src_.nodes(), nt = tgt_.nodes();
    const std::size_t cs = 2 + gd, ct = 4 + gd;
    const std::size_t ps = round_up(cs), pt = round_up(ct);
    total_weight_ = 0.0;

    // Source moments per node: w, w hp, w g_c.
    std::vector<double> mom(ns * ps, 0.0), basis(std::max(src_.per_box(), tgt_.per_box())), q(ps, 0.0);
    double* bp = basis.data();
    for (std::size_t m = 0; m < na; ++m) {
      total_weight_ += w[m];
      if (w[m] == 0.0) continue;
      const std::size_t first = src_.basis(a * hp[m], bp);
      q[0] = w[m];
      q[1] = w[m] * hp[m];
      for (std::size_t c = 0; c < gd; ++c) q[2 + c] = w[m] * gcol[c * na + m];
      spread(bp, src_.per_box(), q.data(), ps, mom.data() + first * ps);
    }
    std::vector<double> mom_t(cs * ns);
    for (std::size_t n = 0; n < ns; ++n)
      for (std::size_t c = 0; c < cs; ++c) mom_t[c * ns + n] = mom[n * ps + c];

    // Node-to-node sums.
    const double half_prec = 0.5 / (s * s);
    std::vector<double> node_sums(nt * pt, 0.0), kv(ns);
    const double* sp = src_.positions().data();
    const double* m0 = mom_t.data();
    const double* m1 = mom_t.data() + ns;
    for (std::size_t qn = 0; qn < nt; ++qn) {
      const double xq = tgt_.positions()[qn];
      double s0 = 0.0, sz = 0.0, sz2 = 0.0, szh = 0.0;
      double* kp = kv.data();
#pragma omp simd reduction(+ : s0, sz, sz2, szh)
      for (std::size_t n = 0; n < ns; ++n) {
        const double z = xq - sp[n];
        const double e = exp_fast(-half_prec * z * z);
        kp[n] = e;
        s0 += e * m0[n];
        sz += e * z * m0[n];
        sz2 += e * z * z * m0[n];
        szh += e * z * m1[n];
      }
      double* dst = node_sums.data() + qn * pt;
      dst[0] = s0;
      dst[1] = sz;
      dst[2] = sz2;
      dst[3] = szh;
      for (std::size_t c = 0; c < gd; ++c) {
        const double* mc = mom_t.data() + (2 + c) * ns;
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t n = 0; n < ns; ++n) acc += kp[n] * mc[n];
        dst[4 + c] = acc;
      }
    }

    // Interpolate to the targets.
    out.assign(N * ct, 0.0);
    std::vector<double> acc(pt);
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t first = tgt_.basis(x[j], bp);
      gather(bp, tgt_.per_box(), node_sums.data() + first * pt, pt, acc.data());
      std::copy_n(acc.data(), ct, out.data() + j * ct);
    }
  }

  double total_weight() const { return total_weight_; }

 private:
  ChebyshevGrid src_;
  ChebyshevGrid tgt_;
  std::size_t gd_;
  double total_weight_ = 0.0;
};

}  // namespace detail

/// One step of the O(N^2) forward-smoothing recursion:
///   g_t(j) = sum_i v_ij (g_{t-1}(i) + grad log p(h_j | h_i)) + grad log p(y_t | h_j),
///   v_ij proportional to prev_weights_i * p(h_j | h_i).
/// Zero-weight previous particles are skipped. Any row whose kernel mass underflows in
/// the fast sweeps is recomputed with the exact log-domain sweep.
template <class Kernel, class State, class Obs>
PathGradientTable score_quadratic_step(const Kernel& k, std::span<const State> prev_particles,
                                       std::span<const double> prev_weights,
                                       const PathGradientTable& g_prev,
                                       std::span<const State> particles, const Obs& y,
                                       std::size_t t = 0, BackwardSweep sweep = BackwardSweep::kAuto) {
  const std::size_t Np = prev_particles.size();
  if (prev_weights.size() != Np || g_prev.particles != Np)
    throw std::invalid_argument("score_quadratic_step: previous particles, weights and gradients differ in size");
  const std::size_t gd = g_prev.dim;
  const std::size_t N = particles.size();

  std::vector<std::size_t> active;
  double w_max = 0.0;
  for (std::size_t i = 0; i < Np; ++i) {
    if (std::isnan(prev_weights[i]) || prev_weights[i] < 0.0)
      throw std::invalid_argument("score_quadratic_step: invalid previous weight");
    if (prev_weights[i] > 0.0) {
      active.push_back(i);
      w_max = std::max(w_max, prev_weights[i]);
    }
  }
  if (active.empty()) throw std::invalid_argument("score_quadratic_step: all previous weights are zero");
  const std::size_t na = active.size();
  // Weights relative to the largest one; their logs are only needed off the interpolated route.
  std::vector<double> w(na), log_prev;
  for (std::size_t m = 0; m < na; ++m) w[m] = prev_weights[active[m]] / w_max;
  auto logs = [&]() -> const std::vector<double>& {
    if (log_prev.empty()) {
      log_prev.resize(na);
      for (std::size_t m = 0; m < na; ++m) log_prev[m] = std::log(w[m]);
    }
    return log_prev;
  };

  PathGradientTable out(N, gd);
  std::vector<double> terms, tmp(gd);

  constexpr bool kLinearGaussian = HasLinearGaussianTransition<Kernel> && std::is_same_v<State, double>;
  if (!kLinearGaussian || sweep == BackwardSweep::kGeneric) {
    for (std::size_t j = 0; j < N; ++j) {
      auto row = out.row(j);
      detail::backward_row_generic(k, prev_particles, std::span<const double>(logs()), active, g_prev,
                                   particles[j], row, terms, tmp, t, j);
      k.grad_log_obs(y, particles[j], tmp);
      for (std::size_t c = 0; c < gd; ++c) row[c] += tmp[c];
    }
    return out;
  }

  if constexpr (kLinearGaussian) {
    const LinearGaussianTransition lg = k.linear_gaussian_transition();
    const double a = lg.coef, b = lg.offset, s = lg.sd;
    const double half_prec = 0.5 / (s * s);
    // Compact copies of the active previous particles, gradients stored column-wise.
    std::vector<double> hp(na), gcol(gd * na), e(na), sums(4 + gd);
    for (std::size_t m = 0; m < na; ++m) {
      hp[m] = prev_particles[active[m]];
      const auto r = g_prev.row(active[m]);
      for (std::size_t c = 0; c < gd; ++c) gcol[c * na + m] = r[c];
    }

    std::vector<double> x(N);
    for (std::size_t j = 0; j < N; ++j) x[j] = particles[j] - b;

    // Interpolated sums when they are cheaper than all pairs.
    std::vector<double> interp;
    double interp_mass = 0.0;
    bool use_interp = false;
    if (sweep != BackwardSweep::kDirect) {
      detail::InterpolatedSweep isw(a, s, hp, gd, x);
      const double ns = static_cast<double>(isw.source_nodes()), nt = static_cast<double>(isw.target_nodes());
      const double pairs = static_cast<double>(na) * static_cast<double>(N);
      const bool cheaper = 2.0 * ns * nt + 40.0 * static_cast<double>(na + N) < pairs;
      if (cheaper || (sweep == BackwardSweep::kInterpolated && ns * nt <= 1e8)) {
        isw.run(a, s, hp, w, gcol, x, interp);
        interp_mass = detail::kChebMinMass * isw.total_weight();
        use_interp = true;
      }
    }

    for (std::size_t j = 0; j < N; ++j) {
      bool done = false;
      if (use_interp) {
        std::copy_n(interp.data() + j * (4 + gd), 4 + gd, sums.data());
        done = sums[0] > interp_mass && std::isfinite(sums[0]);
      }
      if (!done) {
        detail::direct_sums(x[j], a, half_prec, hp.data(), logs().data(), gcol.data(), na, gd, e.data(),
                            sums.data());
        done = sums[0] > 1e-250 && std::isfinite(sums[0]);
      }
      auto row = out.row(j);
      if (!done) {
        detail::backward_row_generic(k, prev_particles, std::span<const double>(logs()), active, g_prev,
                                     particles[j], row, terms, tmp, t, j);
      } else {
        const double inv = 1.0 / sums[0];
        const double ca = sums[3] * inv / (s * s);
        const double cb = sums[1] * inv / (s * s);
        const double cs = sums[2] * inv / (s * s * s) - 1.0 / s;
        for (std::size_t c = 0; c < gd; ++c)
          row[c] = sums[4 + c] * inv + ca * lg.d_coef[c] + cb * lg.d_offset[c] + cs * lg.d_sd[c];
      }
      k.grad_log_obs(y, particles[j], tmp);
      for (std::size_t c = 0; c < gd; ++c) row[c] += tmp[c];
    }
  }
  return out;
}

/// O(N^2) estimate with the backward kernel built from the stored particle system.
template <StateSpaceModel M>
ScoreEstimate score_quadratic(const M& model, std::span<const double> theta,
                              const ParticleSystem<typename M::state_type>& sys,
                              std::span<const typename M::observation_type> y,
                              BackwardSweep sweep = BackwardSweep::kAuto) {
  detail::check_system(model, theta, sys.T, y.size(), "score_quadratic");
  const auto k = model.bind(theta);
  using State = typename M::state_type;
  PathGradientTable g = detail::initial_gradients(k, sys.particles_at(0), y[0], model.grad_dim());
  for (std::size_t t = 1; t < sys.T; ++t) {
    const std::vector<double> w = backward_prior_weights(sys, t);
    g = score_quadratic_step(k, std::span<const State>(sys.particles_at(t - 1)), std::span<const double>(w), g,
                             std::span<const State>(sys.particles_at(t)), y[t], t, sweep);
  }
  return detail::finish_score(model, theta, sys.weights_at(sys.T - 1), g, ScoreKind::kQuadratic);
}

}  // namespace phmc

#endif  // PHMC_GRADIENTS_HPP
