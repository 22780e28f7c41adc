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
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "phmc/diagnostics.hpp"
#include "phmc/models/lgssm.hpp"

namespace {

using phmc::models::LinearGaussianModel;

double normal_logpdf(double x, double var) { return -0.5 * (std::log(2.0 * std::numbers::pi * var) + x * x / var); }

// log density of y under the joint Gaussian implied by the state-space form.
double dense_log_likelihood(const std::vector<double>& th, const std::vector<double>& y, std::size_t d) {
  double mu = 0.0;
  for (std::size_t j = 0; j < d; ++j) mu += th[j];
  mu /= d;
  const double sy = th[d], sh = th[d + 1], rho = th[d + 2];
  const auto T = static_cast<Eigen::Index>(y.size());
  const double v0 = sh * sh / (1.0 - rho * rho);
  Eigen::VectorXd mean(T), r(T);
  Eigen::MatrixXd S(T, T);
  double m = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    mean(t) = m;
    m = mu + rho * m;
    for (Eigen::Index s = 0; s < T; ++s) S(t, s) = v0 * std::pow(rho, std::abs(t - s)) + (t == s ? sy * sy : 0.0);
  }
  for (Eigen::Index t = 0; t < T; ++t) r(t) = y[t] - mean(t);
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  const Eigen::VectorXd z = llt.matrixL().solve(r);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (T * std::log(2.0 * std::numbers::pi) + logdet + z.squaredNorm());
}

TEST(Kalman, SingleObservationIsMarginal) {
  const std::vector<double> th{0.0, 0.0, 0.6, 0.9, 0.4};
  const std::vector<double> y{0.7};
  EXPECT_NEAR(phmc::kalman_log_likelihood(th, y, 2), normal_logpdf(0.7, 0.81 / (1 - 0.16) + 0.36), 1e-14);
}

TEST(Kalman, ObservationNoiseDominates) {
  const std::vector<double> th{0.3, 1e6, 0.5, 0.6};
  const std::vector<double> y{1.0, -2.0, 0.5, 3.0};
  double want = 0.0;
  for (double v : y) want += normal_logpdf(v, 1e12);
  EXPECT_NEAR(phmc::kalman_log_likelihood(th, y, 1), want, 1e-9 * std::abs(want));
}

TEST(Kalman, MatchesDenseCovariance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 1 + rep % 4;
    const std::size_t T = 1 + static_cast<std::size_t>(u(rng) * 20);
    std::vector<double> th;
    for (std::size_t j = 0; j < d; ++j) th.push_back(2.0 * u(rng) - 1.0);
    th.push_back(0.1 + u(rng));
    th.push_back(0.1 + u(rng));
    th.push_back(1.9 * u(rng) - 0.95);
    const auto y = phmc::simulate_dataset(LinearGaussianModel(d), th, T, rep).observations;
    EXPECT_NEAR(phmc::kalman_log_likelihood(th, y, d), dense_log_likelihood(th, y, d), 1e-8) << "rep " << rep;
  }
}

TEST(Kalman, Errors) {
  const std::vector<double> y{0.1};
  EXPECT_THROW(phmc::kalman_log_likelihood(std::vector<double>{0.0, 1.0, 1.0, 1.0}, y, 1), std::domain_error);
  EXPECT_THROW(phmc::kalman_log_likelihood(std::vector<double>{0.0, 1.0, 1.0}, y, 1), std::invalid_argument);
}

TEST(FiniteDifference, QuadraticAndConstant) {
  const std::vector<double> th{0.5, -1.5, 2.0};
  auto quad = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return -0.5 * s;
  };
  const auto g = phmc::finite_difference_score(quad, th);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g[i], -th[i], 1e-9);
  const auto z = phmc::finite_difference_score([](std::span<const double>) { return 3.0; }, th);
  for (double v : z) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(phmc::finite_difference_score(quad, th, 0.0), std::invalid_argument);
}

TEST(FiniteDifference, KalmanScoreStableUnderHalving) {
  const std::size_t d = 5;
  std::vector<double> th = phmc::models::reference_kappas(d);
  th.insert(th.end(), {0.25, 0.2, 0.8});
  const auto y = phmc::simulate_dataset(LinearGaussianModel(d), th, 100, 3).observations;
  auto ll = [&](std::span<const double> x) { return phmc::kalman_log_likelihood(x, y, d); };
  const auto a = phmc::finite_difference_score(ll, th, 1e-4);
  const auto b = phmc::finite_difference_score(ll, th, 5e-5);
  for (std::size_t i = 0; i < th.size(); ++i) {
    EXPECT_TRUE(std::isfinite(a[i]));
    EXPECT_NEAR(a[i], b[i], 1e-5 * std::max(1.0, std::abs(b[i]))) << i;
  }
}

TEST(Acf, Examples) {
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  const auto a = phmc::acf(alt, 2);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_NEAR(a[1], -1.0, 1.0 / 1000 + 1e-12);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> w(100000);
  for (double& v : w) v = n(rng);
  const auto r = phmc::acf(w, 10);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  for (std::size_t k = 1; k <= 10; ++k) EXPECT_LT(std::abs(r[k]), 0.02);

  EXPECT_THROW(phmc::acf(std::vector<double>(10, 2.0), 3), phmc::UndefinedAcfError);
  EXPECT_THROW(phmc::acf(std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);
}

phmc::ChainOutput<double> chain_of(const std::vector<double>& x, std::size_t T = 0) {
  phmc::ChainOutput<double> out;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    phmc::Draw<double> d;
    d.iteration = i + 1;
    d.theta = phmc::ParamVector({"a"}, {x[i]});
    for (std::size_t t = 0; t < T; ++t) d.trajectory.push_back(n(rng) * (1.0 + t));
    out.draws.push_back(d);
    out.accepted.push_back(true);
  }
  out.finish();
  return out;
}

TEST(Summaries, ConstantChain) {
  const auto s = phmc::summarize_chain(chain_of(std::vector<double>(50, 0.3)), 10);
  ASSERT_EQ(s.parameters.size(), 1u);
  const auto& p = s.parameters[0];
  EXPECT_EQ(p.sd, 0.0);
  EXPECT_EQ(p.mean, 0.3);
  EXPECT_EQ(p.q025, 0.3);
  EXPECT_EQ(p.q50, 0.3);
  EXPECT_EQ(p.q975, 0.3);
  EXPECT_TRUE(p.acf.empty());
  EXPECT_EQ(s.acceptance_rate, 1.0);
}

TEST(Summaries, NormalDraws) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(10000);
  for (double& v : x) v = n(rng);
  const auto s = phmc::summarize_chain(chain_of(x), 20);
  const auto& p = s.parameters[0];
  EXPECT_NEAR(p.mean, 0.0, 0.05);
  EXPECT_LE(p.q025, p.q50);
  EXPECT_LE(p.q50, p.q975);
  ASSERT_EQ(p.acf.size(), 21u);
  EXPECT_DOUBLE_EQ(p.acf[0], 1.0);
}

TEST(Summaries, LatentIntervalsAreOrdered) {
  const auto ls = phmc::summarize_latents(chain_of(std::vector<double>(200, 1.0), 30));
  ASSERT_EQ(ls.mean.size(), 30u);
  for (std::size_t t = 0; t < 30; ++t) {
    EXPECT_LE(ls.lower[t], ls.mean[t]);
    EXPECT_LE(ls.mean[t], ls.upper[t]);
  }
}

TEST(Summaries, EmptyChainRejected) {
  phmc::ChainOutput<double> empty;
  EXPECT_THROW(phmc::summarize_chain(empty, 5), std::invalid_argument);
  EXPECT_THROW(phmc::summarize_latents(empty), std::invalid_argument);
}

TEST(Quantile, TypeSeven) {
  const std::vector<double> x{4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(phmc::quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(phmc::quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(phmc::quantile(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(phmc::quantile(x, 0.25), 1.75);
}

}  // namespace
