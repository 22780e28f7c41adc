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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "phmc/diagnostics.hpp"
#include "phmc/models/lgssm.hpp"
#include "phmc/models/poisson.hpp"
#include "phmc/smc.hpp"

namespace {

using phmc::FilterConfig;
using phmc::Resampling;
using phmc::models::LinearGaussianModel;
using phmc::models::PoissonModel;

const std::vector<Resampling> kSchemes{Resampling::kSystematic, Resampling::kStratified, Resampling::kMultinomial};

TEST(Ess, Examples) {
  EXPECT_NEAR(phmc::ess(std::vector<double>(10, 0.1)), 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(phmc::ess(std::vector<double>{0.0, 1.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(phmc::ess(std::vector<double>{0.5, 0.25, 0.25}), 8.0 / 3.0);
  EXPECT_THROW(phmc::ess(std::vector<double>{0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(phmc::ess(std::vector<double>{}), std::invalid_argument);
}

TEST(Resample, PointMass) {
  const std::vector<double> W{0.0, 0.0, 1.0, 0.0};
  phmc::Rng rng(1);
  for (auto s : kSchemes)
    for (std::size_t a : phmc::resample(W, 7, s, rng)) EXPECT_EQ(a, 2u);
}

TEST(Resample, SystematicUniformIsIdentity) {
  const std::vector<double> W(3, 1.0 / 3.0);
  EXPECT_EQ(phmc::systematic_resample(W, 3, 0.0), (std::vector<std::size_t>{0, 1, 2}));
  const std::vector<double> W5(5, 0.2);
  EXPECT_EQ(phmc::systematic_resample(W5, 5, 0.0), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Resample, RejectsNaNAndNegativeWeights) {
  phmc::Rng rng(1);
  for (auto s : kSchemes) {
    EXPECT_THROW(phmc::resample(std::vector<double>{0.5, NAN, 0.5}, 3, s, rng), std::invalid_argument);
    EXPECT_THROW(phmc::resample(std::vector<double>{1.5, -0.5}, 3, s, rng), std::invalid_argument);
  }
}

TEST(Resample, OffspringMeansAreUnbiased) {
  const std::vector<double> W{0.7, 0.2, 0.1};
  const std::size_t N = 10, reps = 100000;
  for (auto s : kSchemes) {
    phmc::Rng rng(99);
    std::vector<double> count(3, 0.0);
    for (std::size_t r = 0; r < reps; ++r)
      for (std::size_t a : phmc::resample(W, N, s, rng)) count[a] += 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double mean = count[i] / reps;
      const double se = std::sqrt(N * W[i] * (1.0 - W[i]) / reps);
      EXPECT_NEAR(mean, N * W[i], 3.0 * se) << "scheme " << static_cast<int>(s) << " index " << i;
    }
  }
}

TEST(LogMarginalIncrements, HandExamples) {
  phmc::ParticleSystem<double> one(1, 2);
  const double a = 0.3, b = 1.7;
  one.log_weights = {std::log(a), std::log(b)};
  EXPECT_NEAR(phmc::log_marginal_increments(one)[0], std::log((a + b) / 2.0), 1e-15);

  phmc::ParticleSystem<double> two(2, 3);
  two.log_weights = {-1.0, -1.0, -1.0, -1.0, -1.0, -1.0};
  two.resampled = {false, false};
  const auto inc = phmc::log_marginal_increments(two);
  EXPECT_NEAR(inc[1], 0.0, 1e-15);
  EXPECT_NEAR(inc[0], -1.0, 1e-15);
}

TEST(RunFilter, SingleParticleSingleStep) {
  const PoissonModel pm;
  const std::vector<double> th{0.8, 0.5, 0.2};
  const std::vector<phmc::Count> y{3};
  FilterConfig cfg;
  cfg.particles = 1;
  phmc::Rng rng(5), replay(5);
  const auto res = phmc::run_filter(pm, th, std::span<const phmc::Count>(y), cfg, rng);
  const auto k = pm.bind(th);
  const double h = k.sample_init(replay);
  EXPECT_DOUBLE_EQ(res.log_z, k.log_obs(3, h));
  EXPECT_EQ(res.trajectory, std::vector<double>{h});
}

template <class State>
void check_system_invariants(const phmc::ParticleSystem<State>& sys) {
  for (std::size_t t = 0; t < sys.T; ++t) {
    double s = 0.0;
    for (double w : sys.weights_at(t)) {
      EXPECT_GE(w, 0.0);
      s += w;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_GE(sys.ess[t], 1.0 - 1e-12);
    EXPECT_LE(sys.ess[t], static_cast<double>(sys.N) * (1.0 + 1e-12));
    if (!sys.resampled[t])
      for (std::size_t i = 0; i < sys.N; ++i) EXPECT_EQ(sys.ancestors_at(t)[i], i);
  }
}

TEST(RunFilter, SystemInvariantsAndTrajectoryLinks) {
  const PoissonModel pm;
  const std::vector<double> th{0.8, 0.5, 0.2};
  const auto sim = phmc::simulate_dataset(pm, th, 60, 3);
  for (auto s : kSchemes) {
    FilterConfig cfg;
    cfg.particles = 200;
    cfg.resampling = s;
    phmc::Rng rng(17);
    const auto res = phmc::run_filter(pm, th, std::span<const phmc::Count>(sim.observations), cfg, rng);
    check_system_invariants(res.system);
    // Each trajectory value is a stored particle, and consecutive values are ancestor-linked.
    const auto& sys = res.system;
    std::size_t b = sys.N;
    for (std::size_t i = 0; i < sys.N; ++i)
      if (sys.particles_at(sys.T - 1)[i] == res.trajectory.back()) b = i;
    ASSERT_LT(b, sys.N);
    for (std::size_t t = sys.T; t-- > 0;) {
      EXPECT_EQ(sys.particles_at(t)[b], res.trajectory[t]);
      if (t > 0) b = sys.ancestors_at(t)[b];
    }
    double total = 0.0;
    for (double v : phmc::log_marginal_increments(sys)) total += v;
    EXPECT_EQ(total, res.log_z);
  }
}

TEST(RunFilter, ThresholdOneResamplesEveryStep) {
  const PoissonModel pm;
  const std::vector<double> th{0.8, 0.5, 0.2};
  const auto sim = phmc::simulate_dataset(pm, th, 30, 3);
  FilterConfig cfg;
  cfg.particles = 50;
  cfg.ess_threshold_fraction = 1.0;
  phmc::Rng rng(2);
  const auto res = phmc::run_filter(pm, th, std::span<const phmc::Count>(sim.observations), cfg, rng);
  for (std::size_t t = 1; t < res.system.T; ++t) EXPECT_TRUE(res.system.resampled[t]) << t;
}

TEST(RunFilter, Deterministic) {
  const LinearGaussianModel lm(2);
  const std::vector<double> th{0.2, 0.8, 0.3, 0.4, 0.7};
  const auto sim = phmc::simulate_dataset(lm, th, 40, 8);
  FilterConfig cfg;
  cfg.particles = 128;
  phmc::Rng r1(4), r2(4);
  const auto a = phmc::run_filter(lm, th, std::span<const double>(sim.observations), cfg, r1, phmc::ScoreKind::kQuadratic);
  const auto b = phmc::run_filter(lm, th, std::span<const double>(sim.observations), cfg, r2, phmc::ScoreKind::kQuadratic);
  EXPECT_EQ(a.log_z, b.log_z);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_EQ(a.system.particles, b.system.particles);
  EXPECT_EQ(a.system.ancestors, b.system.ancestors);
  EXPECT_EQ(a.score->score, b.score->score);
}

TEST(RunFilter, Errors) {
  const LinearGaussianModel lm(1);
  const std::vector<double> th{0.5, 0.3, 0.4, 0.7};
  FilterConfig cfg;
  phmc::Rng rng(1);
  const std::vector<double> far{1e300, 0.0};
  try {
    phmc::run_filter(lm, th, std::span<const double>(far), cfg, rng);
    FAIL() << "expected a degenerate filter";
  } catch (const phmc::DegenerateFilterError& e) {
    EXPECT_EQ(e.time(), 0u);
  }
  const std::vector<double> y{0.1, 0.2};
  EXPECT_THROW(phmc::run_filter(lm, std::vector<double>{0.5, 0.3, 0.4, 1.2}, std::span<const double>(y), cfg, rng),
               std::domain_error);
  EXPECT_THROW(phmc::run_filter(lm, th, std::span<const double>(), cfg, rng), std::invalid_argument);
  cfg.particles = 0;
  EXPECT_THROW(phmc::run_filter(lm, th, std::span<const double>(y), cfg, rng), std::invalid_argument);
  cfg.particles = 10;
  cfg.ess_threshold_fraction = 0.0;
  EXPECT_THROW(phmc::run_filter(lm, th, std::span<const double>(y), cfg, rng), std::invalid_argument);
}

class Unbiasedness : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(Unbiasedness, MeanLikelihoodMatchesKalman) {
  const auto [T, N] = GetParam();
  const LinearGaussianModel lm(1);
  const std::vector<double> th{0.5, 0.5, 0.4, 0.7};
  const auto sim = phmc::simulate_dataset(lm, th, T, 21);
  const double exact = phmc::kalman_log_likelihood(th, sim.observations, 1);
  FilterConfig cfg;
  cfg.particles = N;
  const std::size_t R = 500;
  std::vector<double> ratio(R);
  for (std::size_t r = 0; r < R; ++r) {
    phmc::Rng rng = phmc::make_stream(123, {T, N, r});
    ratio[r] = std::exp(phmc::run_filter(lm, th, std::span<const double>(sim.observations), cfg, rng).log_z - exact);
  }
  double m = 0.0, ss = 0.0;
  for (double v : ratio) m += v;
  m /= R;
  for (double v : ratio) ss += (v - m) * (v - m);
  const double se = std::sqrt(ss / (R - 1) / R);
  EXPECT_NEAR(m, 1.0, 3.0 * se);
}

INSTANTIATE_TEST_SUITE_P(Grid, Unbiasedness,
                         ::testing::Values(std::pair<std::size_t, std::size_t>{5, 50},
                                           std::pair<std::size_t, std::size_t>{5, 500},
                                           std::pair<std::size_t, std::size_t>{20, 50},
                                           std::pair<std::size_t, std::size_t>{20, 500}));

}  // namespace
