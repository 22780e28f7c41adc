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

#ifndef PHMC_MODELS_LGSSM_HPP
#define PHMC_MODELS_LGSSM_HPP

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phmc/math.hpp"
#include "phmc/model.hpp"
#include "phmc/priors.hpp"
#include "phmc/random.hpp"
#include "phmc/types.hpp"

namespace phmc::models {

/// Linear-Gaussian state-space model whose drift is the mean of d shift parameters:
///
///   Y_t | h_t       ~ N(h_t, sigma_y^2)
///   H_t | h_{t-1}   ~ N(rho h_{t-1} + mean(kappa), sigma_h^2)
///   H_1             ~ N(0, sigma_h^2 / (1 - rho^2))
///
/// theta = (kappa_1, ..., kappa_d, sigma_y, sigma_h, rho), so d_theta = d + 3.
/// Gradient coordinates are (mean(kappa), sigma_y, sigma_h, rho); expand_grad spreads the
/// first one over the kappas with the 1/d chain-rule factor.
class LinearGaussianModel {
 public:
  using state_type = double;
  using observation_type = double;

  enum GradIndex : std::size_t { kMu = 0, kSigmaY = 1, kSigmaH = 2, kRho = 3 };

  priors::Normal kappa_prior{0.0, 10.0};
  priors::GammaPrecision sigma_prior{0.01, 0.01};
  priors::Uniform rho_prior{-1.0, 1.0};

  explicit LinearGaussianModel(std::size_t d) : d_(d) {
    if (d < 1) throw std::invalid_argument("LinearGaussianModel: d must be at least 1");
  }

  std::size_t kappa_count() const { return d_; }
  std::size_t sigma_y_index() const { return d_; }
  std::size_t sigma_h_index() const { return d_ + 1; }
  std::size_t rho_index() const { return d_ + 2; }

  double kappa_mean(std::span<const double> theta) const {
    double s = 0.0;
    for (std::size_t j = 0; j < d_; ++j) s += theta[j];
    return s / static_cast<double>(d_);
  }

  class Kernel {
   public:
    Kernel(double mu, double sigma_y, double sigma_h, double rho)
        : mu_(mu), sigma_y_(sigma_y), sigma_h_(sigma_h), rho_(rho) {
      one_minus_rho2_ = 1.0 - rho_ * rho_;
      inv_var_h_ = 1.0 / (sigma_h_ * sigma_h_);
      inv_var_y_ = 1.0 / (sigma_y_ * sigma_y_);
      init_const_ = -std::log(sigma_h_) + 0.5 * std::log(one_minus_rho2_) - kLogSqrt2Pi;
      trans_const_ = -std::log(sigma_h_) - kLogSqrt2Pi;
      obs_const_ = -std::log(sigma_y_) - kLogSqrt2Pi;
    }

    double log_init(double h) const { return init_const_ - 0.5 * h * h * one_minus_rho2_ * inv_var_h_; }

    double log_trans(double h, double h_prev) const {
      const double r = h - mu_ - rho_ * h_prev;
      return trans_const_ - 0.5 * r * r * inv_var_h_;
    }

    double log_obs(double y, double h) const {
      const double r = y - h;
      return obs_const_ - 0.5 * r * r * inv_var_y_;
    }

    double sample_init(Rng& rng) const {
      return std::normal_distribution<double>(0.0, sigma_h_ / std::sqrt(one_minus_rho2_))(rng);
    }
    double sample_trans(double h_prev, Rng& rng) const {
      return std::normal_distribution<double>(rho_ * h_prev + mu_, sigma_h_)(rng);
    }
    double sample_obs(double h, Rng& rng) const {
      return std::normal_distribution<double>(h, sigma_y_)(rng);
    }

    void grad_log_init(double h, std::span<double> out) const {
      out[kMu] = 0.0;
      out[kSigmaY] = 0.0;
      out[kSigmaH] = -1.0 / sigma_h_ + h * h * one_minus_rho2_ * inv_var_h_ / sigma_h_;
      out[kRho] = h * h * rho_ * inv_var_h_ - rho_ / one_minus_rho2_;
    }

    void grad_log_trans(double h, double h_prev, std::span<double> out) const {
      const double r = h - mu_ - rho_ * h_prev;
      out[kMu] = r * inv_var_h_;
      out[kSigmaY] = 0.0;
      out[kSigmaH] = -1.0 / sigma_h_ + r * r * inv_var_h_ / sigma_h_;
      out[kRho] = h_prev * r * inv_var_h_;
    }

    void grad_log_obs(double y, double h, std::span<double> out) const {
      const double r = y - h;
      out[kMu] = 0.0;
      out[kSigmaY] = -1.0 / sigma_y_ + r * r * inv_var_y_ / sigma_y_;
      out[kSigmaH] = 0.0;
      out[kRho] = 0.0;
    }

    LinearGaussianTransition linear_gaussian_transition() const {
      return {rho_, mu_, sigma_h_, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 0, 1, 0}};
    }

   private:
    double mu_, sigma_y_, sigma_h_, rho_;
    double one_minus_rho2_, inv_var_h_, inv_var_y_, init_const_, trans_const_, obs_const_;
  };

  std::size_t dim() const { return d_ + 3; }
  std::size_t grad_dim() const { return 4; }

  std::vector<std::string> param_names() const {
    std::vector<std::string> names;
    names.reserve(dim());
    for (std::size_t j = 0; j < d_; ++j) names.push_back("kappa_" + std::to_string(j + 1));
    names.insert(names.end(), {"sigma_y", "sigma_h", "rho"});
    return names;
  }

  bool in_support(std::span<const double> theta) const {
    if (theta.size() != dim()) return false;
    for (double v : theta)
      if (!std::isfinite(v)) return false;
    return theta[sigma_y_index()] > 0.0 && theta[sigma_h_index()] > 0.0 &&
           rho_prior.contains(theta[rho_index()]);
  }

  double log_prior(std::span<const double> theta) const {
    if (!in_support(theta)) return kNegInf;
    double s = 0.0;
    for (std::size_t j = 0; j < d_; ++j) s += kappa_prior.log_pdf(theta[j]);
    return s + sigma_prior.log_pdf(theta[sigma_y_index()]) +
           sigma_prior.log_pdf(theta[sigma_h_index()]) + rho_prior.log_pdf(theta[rho_index()]);
  }

  void grad_log_prior(std::span<const double> theta, std::span<double> out) const {
    for (std::size_t j = 0; j < d_; ++j) out[j] = kappa_prior.grad(theta[j]);
    out[sigma_y_index()] = sigma_prior.grad(theta[sigma_y_index()]);
    out[sigma_h_index()] = sigma_prior.grad(theta[sigma_h_index()]);
    out[rho_index()] = rho_prior.grad(theta[rho_index()]);
  }

  void expand_grad(std::span<const double>, std::span<const double> compact,
                   std::span<double> out) const {
    const double per_kappa = compact[kMu] / static_cast<double>(d_);
    for (std::size_t j = 0; j < d_; ++j) out[j] = per_kappa;
    out[sigma_y_index()] = compact[kSigmaY];
    out[sigma_h_index()] = compact[kSigmaH];
    out[rho_index()] = compact[kRho];
  }

  std::vector<double> sample_prior(Rng& rng) const {
    std::vector<double> theta(dim());
    for (std::size_t j = 0; j < d_; ++j) theta[j] = kappa_prior.sample(rng);
    theta[sigma_y_index()] = sigma_prior.sample(rng);
    theta[sigma_h_index()] = sigma_prior.sample(rng);
    theta[rho_index()] = rho_prior.sample(rng);
    return theta;
  }

  Kernel bind(std::span<const double> theta) const {
    check_dim(theta.size(), dim(), "LinearGaussianModel");
    return Kernel(kappa_mean(theta), theta[sigma_y_index()], theta[sigma_h_index()],
                  theta[rho_index()]);
  }

 private:
  std::size_t d_;
};

inline LinearGaussianModel make_lgssm_model(std::size_t d) { return LinearGaussianModel(d); }

/// Shift parameters with mean 0.5, evenly spread over [0, 1] (all 0.5 when d == 1).
inline std::vector<double> reference_kappas(std::size_t d) {
  std::vector<double> k(d, 0.5);
  if (d > 1)
    for (std::size_t j = 0; j < d; ++j) k[j] = static_cast<double>(j) / static_cast<double>(d - 1);
  return k;
}

}  // namespace phmc::models

#endif  // PHMC_MODELS_LGSSM_HPP
