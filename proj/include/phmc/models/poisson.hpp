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

#ifndef PHMC_MODELS_POISSON_HPP
#define PHMC_MODELS_POISSON_HPP

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "phmc/math.hpp"
#include "phmc/model.hpp"
#include "phmc/priors.hpp"
#include "phmc/random.hpp"
#include "phmc/types.hpp"

namespace phmc::models {

/// Poisson count model with a stationary AR(1) log-intensity:
///
///   Y_t | h_t       ~ Po(exp(h_t + alpha))
///   H_t | h_{t-1}   ~ N(rho h_{t-1}, sigma_h^2)
///   H_1             ~ N(0, sigma_h^2 / (1 - rho^2))
///
/// theta = (rho, alpha, sigma_h). Priors: rho ~ U(-1, 1), alpha ~ N(0, 10^2),
/// 1/sigma_h^2 ~ Gamma(0.01, 0.01) (shape, rate).
class PoissonModel {
 public:
  using state_type = double;
  using observation_type = Count;

  enum Index : std::size_t { kRho = 0, kAlpha = 1, kSigmaH = 2 };

  priors::Uniform rho_prior{-1.0, 1.0};
  priors::Normal alpha_prior{0.0, 10.0};
  priors::GammaPrecision sigma_prior{0.01, 0.01};

  class Kernel {
   public:
    explicit Kernel(std::span<const double> theta)
        : rho_(theta[kRho]), alpha_(theta[kAlpha]), sigma_(theta[kSigmaH]) {
      log_sigma_ = std::log(sigma_);
      one_minus_rho2_ = 1.0 - rho_ * rho_;
      inv_var_ = 1.0 / (sigma_ * sigma_);
      init_const_ = -log_sigma_ + 0.5 * std::log(one_minus_rho2_) - kLogSqrt2Pi;
      trans_const_ = -log_sigma_ - kLogSqrt2Pi;
    }

    double log_init(double h) const { return init_const_ - 0.5 * h * h * one_minus_rho2_ * inv_var_; }

    double log_trans(double h, double h_prev) const {
      const double r = h - rho_ * h_prev;
      return trans_const_ - 0.5 * r * r * inv_var_;
    }

    double log_obs(Count y, double h) const {
      const double eta = h + alpha_;
      return static_cast<double>(y) * eta - std::exp(eta) - log_factorial(y);
    }

    double sample_init(Rng& rng) const {
      return std::normal_distribution<double>(0.0, sigma_ / std::sqrt(one_minus_rho2_))(rng);
    }
    double sample_trans(double h_prev, Rng& rng) const {
      return std::normal_distribution<double>(rho_ * h_prev, sigma_)(rng);
    }
    Count sample_obs(double h, Rng& rng) const {
      return std::poisson_distribution<Count>(std::exp(h + alpha_))(rng);
    }

    void grad_log_init(double h, std::span<double> out) const {
      out[kRho] = h * h * rho_ * inv_var_ - rho_ / one_minus_rho2_;
      out[kAlpha] = 0.0;
      out[kSigmaH] = -1.0 / sigma_ + h * h * one_minus_rho2_ * inv_var_ / sigma_;
    }

    void grad_log_trans(double h, double h_prev, std::span<double> out) const {
      const double r = h - rho_ * h_prev;
      out[kRho] = (h * h_prev - rho_ * h_prev * h_prev) * inv_var_;
      out[kAlpha] = 0.0;
      out[kSigmaH] = -1.0 / sigma_ + r * r * inv_var_ / sigma_;
    }

    void grad_log_obs(Count y, double h, std::span<double> out) const {
      out[kRho] = 0.0;
      out[kAlpha] = static_cast<double>(y) - std::exp(h + alpha_);
      out[kSigmaH] = 0.0;
    }

    LinearGaussianTransition linear_gaussian_transition() const {
      return {rho_, 0.0, sigma_, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    }

   private:
    double rho_, alpha_, sigma_;
    double log_sigma_, one_minus_rho2_, inv_var_, init_const_, trans_const_;
  };

  std::size_t dim() const { return 3; }
  std::size_t grad_dim() const { return 3; }
  std::vector<std::string> param_names() const { return {"rho", "alpha", "sigma_h"}; }

  bool in_support(std::span<const double> theta) const {
    if (theta.size() != dim()) return false;
    for (double v : theta)
      if (!std::isfinite(v)) return false;
    return rho_prior.contains(theta[kRho]) && theta[kSigmaH] > 0.0;
  }

  double log_prior(std::span<const double> theta) const {
    if (!in_support(theta)) return kNegInf;
    return rho_prior.log_pdf(theta[kRho]) + alpha_prior.log_pdf(theta[kAlpha]) +
           sigma_prior.log_pdf(theta[kSigmaH]);
  }

  void grad_log_prior(std::span<const double> theta, std::span<double> out) const {
    out[kRho] = rho_prior.grad(theta[kRho]);
    out[kAlpha] = alpha_prior.grad(theta[kAlpha]);
    out[kSigmaH] = sigma_prior.grad(theta[kSigmaH]);
  }

  void expand_grad(std::span<const double>, std::span<const double> compact,
                   std::span<double> out) const {
    for (std::size_t i = 0; i < 3; ++i) out[i] = compact[i];
  }

  std::vector<double> sample_prior(Rng& rng) const {
    return {rho_prior.sample(rng), alpha_prior.sample(rng), sigma_prior.sample(rng)};
  }

  Kernel bind(std::span<const double> theta) const {
    check_dim(theta.size(), dim(), "PoissonModel");
    return Kernel(theta);
  }
};

inline PoissonModel make_poisson_model() { return PoissonModel{}; }

}  // namespace phmc::models

#endif  // PHMC_MODELS_POISSON_HPP
