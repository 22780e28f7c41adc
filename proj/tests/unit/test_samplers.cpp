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
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "phmc/models/lgssm.hpp"
#include "phmc/models/poisson.hpp"
#include "phmc/samplers.hpp"

namespace {

using phmc::SamplerConfig;
using phmc::models::LinearGaussianModel;
using phmc::models::PoissonModel;

std::vector<double> neg(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = -v;
  return out;
}

TEST(Leapfrog, HandEvaluatedStep) {
  const std::vector<double> th{1.0}, r{0.0};
  const auto res = phmc::leapfrog(neg, th, r, 1, 0.1);
  EXPECT_NEAR(res.theta[0], 0.995, 1e-15);
  EXPECT_NEAR(res.r[0], -0.09975, 1e-15);
  ASSERT_EQ(res.theta_trace.size(), 2u);
  EXPECT_EQ(res.theta_trace[0][0], 1.0);
  EXPECT_EQ(res.r_trace[1][0], res.r[0]);
}

auto anisotropic = [](std::span<const double> x) { return std::vector<double>{-x[0], -4.0 * x[1] - 0.5 * x[0]}; };

TEST(Leapfrog, Reversible) {
  const std::vector<double> th{0.7, -1.3}, r{0.4, 1.1};
  const auto fwd = phmc::leapfrog(anisotropic, th, r, 25, 0.07);
  const auto back = phmc::leapfrog(anisotropic, fwd.theta, neg(fwd.r), 25, 0.07);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(back.theta[i], th[i], 1e-10);
    EXPECT_NEAR(-back.r[i], r[i], 1e-10);
  }
}

TEST(Leapfrog, FreeParticle) {
  auto zero = [](std::span<const double> x) { return std::vector<double>(x.size(), 0.0); };
  const std::vector<double> th{1.0, -2.0}, r{0.3, 0.5};
  const auto res = phmc::leapfrog(zero, th, r, 7, 0.2);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(res.theta[i], th[i] + 7 * 0.2 * r[i], 1e-14);
    EXPECT_EQ(res.r[i], r[i]);
  }
}

TEST(Leapfrog, PreservesVolume) {
  const double h = 1e-5;
  const std::vector<double> z0{0.3, -0.8, 1.2, 0.4};
  auto step = [&](const std::vector<double>& z) {
    const auto res = phmc::leapfrog(anisotropic, std::span<const double>(z).first(2),
                                    std::span<const double>(z).subspan(2), 1, 0.3);
    return std::vector<double>{res.theta[0], res.theta[1], res.r[0], res.r[1]};
  };
  Eigen::Matrix4d J;
  for (int c = 0; c < 4; ++c) {
    auto zp = z0, zm = z0;
    zp[c] += h;
    zm[c] -= h;
    const auto fp = step(zp), fm = step(zm);
    for (int r = 0; r < 4; ++r) J(r, c) = (fp[r] - fm[r]) / (2 * h);
  }
  EXPECT_NEAR(std::abs(J.determinant()), 1.0, 1e-6);
}

TEST(Leapfrog, NonFiniteGradientReportsStep) {
  int calls = 0;
  auto bad = [&](std::span<const double> x) {
    return ++calls >= 3 ? std::vector<double>{NAN} : std::vector<double>{-x[0]};
  };
  try {
    phmc::leapfrog(bad, std::vector<double>{1.0}, std::vector<double>{0.5}, 5, 0.1);
    FAIL() << "expected divergence";
  } catch (const phmc::DivergenceError& e) {
    EXPECT_EQ(e.step(), 2u);
  }
  EXPECT_THROW(phmc::leapfrog(neg, std::vector<double>{1.0}, std::vector<double>{0.5}, 0, 0.1),
               std::invalid_argument);
  EXPECT_THROW(phmc::leapfrog(neg, std::vector<double>{1.0}, std::vector<double>{0.5}, 1, 0.0),
               std::invalid_argument);
}

TEST(Hmc, KineticEnergy) {
  EXPECT_EQ(phmc::kinetic_energy(std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(phmc::kinetic_energy(std::vector<double>{1.0, 2.0}), 2.5);
}

auto std_normal = [](std::span<const double> x) { return -0.5 * x[0] * x[0]; };

TEST(Hmc, StandardNormalMoments) {
  SamplerConfig cfg;
  cfg.K = 20000;
  cfg.L = 10;
  cfg.epsilon = 0.1;
  cfg.seed = 2024;
  const auto out = phmc::hmc(std_normal, neg, cfg, std::vector<double>{0.0});
  double m = 0.0, v = 0.0;
  for (const auto& d : out.draws) m += d.theta[0];
  m /= out.draws.size();
  for (const auto& d : out.draws) v += (d.theta[0] - m) * (d.theta[0] - m);
  v /= out.draws.size() - 1;
  EXPECT_NEAR(m, 0.0, 0.05);
  EXPECT_NEAR(v, 1.0, 0.1);
}

TEST(Hmc, TinyStepAcceptsEverything) {
  SamplerConfig cfg;
  cfg.K = 300;
  cfg.L = 3;
  cfg.epsilon = 1e-8;
  const auto out = phmc::hmc(std_normal, neg, cfg, std::vector<double>{0.4});
  EXPECT_EQ(out.acceptance_rate, 1.0);
}

TEST(Hmc, KeptCountAndAcceptanceRate) {
  SamplerConfig cfg;
  cfg.K = 103;
  cfg.burn_in = 10;
  cfg.thin = 7;
  cfg.epsilon = 1.5;
  const auto out = phmc::hmc(std_normal, neg, cfg, std::vector<double>{0.4});
  EXPECT_EQ(out.draws.size(), 13u);
  EXPECT_EQ(out.accepted.size(), 103u);
  double n = 0;
  for (bool a : out.accepted) n += a;
  EXPECT_DOUBLE_EQ(out.acceptance_rate, n / 103.0);
  for (const auto& d : out.draws) EXPECT_TRUE(d.iteration > 10 && (d.iteration - 10) % 7 == 0);

  cfg.burn_in = cfg.K - 1;
  cfg.thin = 1;
  EXPECT_EQ(phmc::hmc(std_normal, neg, cfg, std::vector<double>{0.4}).draws.size(), 1u);
}

TEST(Hmc, DivergencesAreCountedAsRejections) {
  SamplerConfig cfg;
  cfg.K = 20;
  auto nan_grad = [](std::span<const double>) { return std::vector<double>{NAN}; };
  const auto out = phmc::hmc(std_normal, nan_grad, cfg, std::vector<double>{0.4});
  EXPECT_EQ(out.divergences, 20u);
  EXPECT_EQ(out.acceptance_rate, 0.0);
}

TEST(SamplerConfig, Validation) {
  SamplerConfig cfg;
  cfg.K = 10;
  cfg.burn_in = 10;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.burn_in = 0;
  cfg.thin = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.thin = 1;
  cfg.L = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.L = 1;
  cfg.epsilon = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(AcceptLog, IdenticalEnergiesAlwaysAccept) {
  phmc::Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(phmc::detail::accept_log(0.0, rng));
  EXPECT_FALSE(phmc::detail::accept_log(NAN, rng));
  EXPECT_FALSE(phmc::detail::accept_log(phmc::kNegInf, rng));
}

// Forwards to a model and fails the test if any density is bound outside the support.
template <class M>
struct SupportGuard {
  using state_type = typename M::state_type;
  using observation_type = typename M::observation_type;
  M inner;
  std::size_t dim() const { return inner.dim(); }
  std::size_t grad_dim() const { return inner.grad_dim(); }
  std::vector<std::string> param_names() const { return inner.param_names(); }
  bool in_support(std::span<const double> th) const { return inner.in_support(th); }
  double log_prior(std::span<const double> th) const { return inner.log_prior(th); }
  void grad_log_prior(std::span<const double> th, std::span<double> out) const {
    EXPECT_TRUE(inner.in_support(th));
    inner.grad_log_prior(th, out);
  }
  void expand_grad(std::span<const double> th, std::span<const double> c, std::span<double> out) const {
    inner.expand_grad(th, c, out);
  }
  auto bind(std::span<const double> th) const {
    EXPECT_TRUE(inner.in_support(th)) << "density evaluated outside the support";
    return inner.bind(th);
  }
};

class PoissonChains : public ::testing::Test {
 protected:
  PoissonModel model;
  std::vector<double> truth{0.8, 0.5, 0.2};
  std::vector<phmc::Count> y = phmc::simulate_dataset(model, truth, 40, 6).observations;
  std::span<const phmc::Count> ys() const { return y; }
};

TEST_F(PoissonChains, PmmhStaysInSupport) {
  SamplerConfig cfg;
  cfg.K = 150;
  cfg.N = 50;
  cfg.rw_scale = 0.3;
  const auto out = phmc::pmmh(SupportGuard<PoissonModel>{model}, ys(), cfg, std::vector<double>{0.95, 0.5, 0.2});
  EXPECT_GT(out.out_of_support, 0u);
  for (const auto& d : out.draws) EXPECT_TRUE(model.in_support(d.theta.values()));
}

TEST_F(PoissonChains, PmmhZeroStepKeepsTheta) {
  SamplerConfig cfg;
  cfg.K = 30;
  cfg.N = 30;
  cfg.rw_scale = 0.0;
  const auto out = phmc::pmmh(model, ys(), cfg, truth);
  for (const auto& d : out.draws) EXPECT_EQ(d.theta.vector(), truth);
  EXPECT_GT(out.acceptance_rate, 0.0);
}

TEST_F(PoissonChains, PhmcWithOneStepRunsAndIsDeterministic) {
  SamplerConfig cfg;
  cfg.K = 40;
  cfg.N = 60;
  cfg.L = 1;
  cfg.epsilon = 0.02;
  cfg.seed = 9;
  const auto a = phmc::phmc(model, ys(), cfg, truth);
  const auto b = phmc::phmc(model, ys(), cfg, truth);
  EXPECT_GT(a.acceptance_rate, 0.0);
  ASSERT_EQ(a.draws.size(), b.draws.size());
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    EXPECT_EQ(a.draws[i].theta.vector(), b.draws[i].theta.vector());
    EXPECT_EQ(a.draws[i].log_z, b.draws[i].log_z);
  }
  EXPECT_EQ(a.accepted, b.accepted);
}

TEST_F(PoissonChains, PhmcLeavingSupportIsRejected) {
  SamplerConfig cfg;
  cfg.K = 60;
  cfg.N = 40;
  cfg.L = 5;
  cfg.epsilon = 0.3;
  const auto out = phmc::phmc(SupportGuard<PoissonModel>{model}, ys(), cfg, std::vector<double>{0.97, 0.5, 0.2});
  EXPECT_GT(out.out_of_support, 0u);
  for (const auto& d : out.draws) EXPECT_TRUE(model.in_support(d.theta.values()));
}

TEST_F(PoissonChains, PhmcEstimateComesFromTrajectoryRun) {
  SamplerConfig cfg;
  cfg.K = 30;
  cfg.N = 50;
  cfg.L = 3;
  cfg.epsilon = 0.01;
  cfg.seed = 4;
  cfg.chain = 2;
  const auto out = phmc::phmc(model, ys(), cfg, truth);
  std::size_t checked = 0;
  for (const auto& d : out.draws) {
    if (!out.accepted[d.iteration - 1]) continue;
    phmc::Rng rng = phmc::make_stream(cfg.seed, {cfg.chain, d.iteration, phmc::key(phmc::StreamRole::kFilterStep), cfg.L});
    const auto res = phmc::run_filter(model, d.theta.values(), ys(), cfg.filter(), rng, phmc::ScoreKind::kQuadratic);
    EXPECT_EQ(res.log_z, d.log_z);
    EXPECT_EQ(res.trajectory, d.trajectory);
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST_F(PoissonChains, PhmcReuseCurrentEstimate) {
  SamplerConfig cfg;
  cfg.K = 30;
  cfg.N = 50;
  cfg.L = 2;
  cfg.epsilon = 0.01;
  cfg.reuse_current_loglik = true;
  const auto out = phmc::phmc(model, ys(), cfg, truth, phmc::ScoreKind::kLinear);
  EXPECT_EQ(out.accepted.size(), 30u);
  EXPECT_GT(out.acceptance_rate, 0.0);
}

TEST(Samplers, RejectBadStart) {
  const PoissonModel model;
  const std::vector<phmc::Count> y{1, 2};
  SamplerConfig cfg;
  EXPECT_THROW(phmc::pmmh(model, std::span<const phmc::Count>(y), cfg, std::vector<double>{1.5, 0.0, 1.0}),
               std::domain_error);
  EXPECT_THROW(phmc::phmc(model, std::span<const phmc::Count>(y), cfg, std::vector<double>{0.5, 0.0, -1.0}),
               std::domain_error);
  EXPECT_THROW(phmc::phmc(model, std::span<const phmc::Count>(y), cfg, std::vector<double>{0.5, 0.0, 1.0},
                          phmc::ScoreKind::kNone),
               std::invalid_argument);
}

}  // namespace
