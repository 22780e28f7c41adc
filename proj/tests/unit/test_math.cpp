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
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "phmc/math.hpp"

namespace {

using phmc::kNegInf;

TEST(ExpFast, MatchesStdExp) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-707.0, 5.0);
  for (int i = 0; i < 200000; ++i) {
    const double x = u(rng);
    const double want = std::exp(x);
    EXPECT_NEAR(phmc::detail::exp_fast(x), want, 2e-14 * want) << x;
  }
  EXPECT_EQ(phmc::detail::exp_fast(0.0), 1.0);
  EXPECT_EQ(phmc::detail::exp_fast(-800.0), 0.0);
  EXPECT_EQ(phmc::detail::exp_fast(kNegInf), 0.0);
}

TEST(LogSumExp, Basics) {
  const std::vector<double> x{std::log(1.0), std::log(2.0), std::log(3.0)};
  EXPECT_NEAR(phmc::log_sum_exp(x), std::log(6.0), 1e-14);
  EXPECT_EQ(phmc::log_sum_exp(std::vector<double>{}), kNegInf);
  EXPECT_EQ(phmc::log_sum_exp(std::vector<double>{kNegInf, kNegInf}), kNegInf);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_NEAR(phmc::log_sum_exp(std::vector<double>{nan, 0.0}), 0.0, 1e-15);
}

TEST(LogSumExp, NoOverflowOrUnderflow) {
  EXPECT_NEAR(phmc::log_sum_exp(std::vector<double>{1000.0, 1000.0}), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(phmc::log_sum_exp(std::vector<double>{-1000.0, -1000.0}), -1000.0 + std::log(2.0), 1e-12);
}

TEST(NormalizeLogWeights, SumsToOne) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 30.0);
  std::vector<double> lw(5000), w(5000);
  for (auto& v : lw) v = n(rng);
  lw[17] = kNegInf;
  const double lse = phmc::normalize_log_weights(lw, w);
  double s = 0.0;
  for (double v : w) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_EQ(w[17], 0.0);
  EXPECT_NEAR(w[3], std::exp(lw[3] - lse), 1e-13);
}

TEST(LogFactorial, MatchesLgamma) {
  EXPECT_EQ(phmc::log_factorial(0), 0.0);
  EXPECT_EQ(phmc::log_factorial(1), 0.0);
  EXPECT_NEAR(phmc::log_factorial(5), std::log(120.0), 1e-13);
  for (long n : {10L, 1023L, 1024L, 5000L})
    EXPECT_NEAR(phmc::log_factorial(n), std::lgamma(n + 1.0), 1e-9);
}

TEST(LogNormalPdf, StandardNormalAtZero) {
  EXPECT_NEAR(phmc::log_normal_pdf(0.0, 0.0, 1.0), -0.5 * std::log(2.0 * M_PI), 1e-15);
  EXPECT_NEAR(phmc::log_normal_pdf(3.0, 1.0, 2.0), -std::log(2.0) - 0.5 * std::log(2.0 * M_PI) - 0.5, 1e-15);
}

}  // namespace
