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

#ifndef PHMC_TYPES_HPP
#define PHMC_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phmc {

/// Non-negative integer observation (Poisson counts).
using Count = std::int64_t;

template <class State>
using Trajectory = std::vector<State>;

template <class Obs>
using ObservationSeries = std::vector<Obs>;

// Errors. Argument and support violations use the standard invalid_argument and
// domain_error; the numerical failure modes below carry where they happened.

class DegenerateFilterError : public std::runtime_error {
 public:
  explicit DegenerateFilterError(std::size_t time)
      : std::runtime_error("particle filter degenerate: all weights are zero at t=" +
                           std::to_string(time + 1)),
        time_(time) {}
  /// Zero-based time index.
  std::size_t time() const noexcept { return time_; }

 private:
  std::size_t time_;
};

class DegenerateBackwardKernelError : public std::runtime_error {
 public:
  DegenerateBackwardKernelError(std::size_t time, std::size_t particle)
      : std::runtime_error("backward kernel has no mass at t=" + std::to_string(time + 1) +
                           " for particle " + std::to_string(particle)),
        time_(time),
        particle_(particle) {}
  std::size_t time() const noexcept { return time_; }
  std::size_t particle() const noexcept { return particle_; }

 private:
  std::size_t time_;
  std::size_t particle_;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : std::runtime_error("leapfrog diverged at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class UndefinedAcfError : public std::domain_error {
 public:
  UndefinedAcfError() : std::domain_error("autocorrelation undefined for a constant series") {}
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named parameter vector. Names and values have equal length; values are finite.
class ParamVector {
 public:
  ParamVector() = default;

  ParamVector(std::vector<std::string> names, std::vector<double> values)
      : names_(std::move(names)), values_(std::move(values)) {
    if (names_.size() != values_.size())
      throw std::invalid_argument("ParamVector: " + std::to_string(names_.size()) + " names but " +
                                  std::to_string(values_.size()) + " values");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw std::invalid_argument("ParamVector: component '" + names_[i] + "' is not finite");
  }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }

  double at(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return values_[i];
    throw std::invalid_argument("ParamVector: no component named '" + std::string(name) + "'");
  }

  ParamVector with_values(std::vector<double> values) const {
    return ParamVector(names_, std::move(values));
  }

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

}  // namespace phmc

#endif  // PHMC_TYPES_HPP
