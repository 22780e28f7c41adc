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

#ifndef PHMC_CLI_CONFIG_HPP
#define PHMC_CLI_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace phmc::cli {

using json = nlohmann::json;

/// Thrown once with every violation found while reading a config.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s;
    for (const auto& x : p) s += (s.empty() ? "" : "; ") + x;
    return s;
  }
  std::vector<std::string> problems_;
};

/// Typed access to a JSON object that records problems instead of throwing, so that all
/// of them can be reported together. Keys that are never read count as unknown.
class ConfigReader {
 public:
  explicit ConfigReader(const json& j) : j_(j) {
    if (!j_.is_object()) problems_.push_back("config must be a JSON object");
  }

  bool has(const std::string& k) {
    used_.insert(k);
    return j_.is_object() && j_.contains(k) && !j_.at(k).is_null();
  }

  void problem(std::string msg) { problems_.push_back(std::move(msg)); }
  const json& raw() const { return j_; }

  std::int64_t integer(const std::string& k, std::optional<std::int64_t> def, std::int64_t min,
                       std::int64_t max = std::numeric_limits<std::int64_t>::max()) {
    if (!has(k)) return missing(k, def, std::int64_t{0});
    const json& v = j_.at(k);
    if (!v.is_number_integer()) {
      problem("'" + k + "' must be an integer");
      return min;
    }
    const auto x = v.get<std::int64_t>();
    if (x < min || x > max) {
      problem("'" + k + "' must be in [" + std::to_string(min) + ", " + std::to_string(max) + "], got " +
              std::to_string(x));
      return min;
    }
    return x;
  }

  std::uint64_t seed(const std::string& k) {
    if (!has(k)) return 0;
    const json& v = j_.at(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      problem("'" + k + "' must be a non-negative integer");
      return 0;
    }
    return v.get<std::uint64_t>();
  }

  /// Real in the open or closed interval given by the flags.
  double real(const std::string& k, std::optional<double> def, double lo, double hi, bool lo_open = false,
              bool hi_open = false) {
    if (!has(k)) return missing(k, def, 0.0);
    const json& v = j_.at(k);
    if (!v.is_number()) {
      problem("'" + k + "' must be a number");
      return lo;
    }
    return check_real(k, v.get<double>(), lo, hi, lo_open, hi_open);
  }

  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    if (!v.is_boolean()) {
      problem("'" + k + "' must be true or false");
      return def;
    }
    return v.get<bool>();
  }

  std::string string(const std::string& k, std::optional<std::string> def) {
    if (!has(k)) return missing(k, def, std::string());
    const json& v = j_.at(k);
    if (!v.is_string()) {
      problem("'" + k + "' must be a string");
      return {};
    }
    return v.get<std::string>();
  }

  std::string choice(const std::string& k, std::optional<std::string> def,
                     const std::vector<std::string>& allowed) {
    std::string s = string(k, def);
    if (s.empty() && !has(k)) return s;
    for (const auto& a : allowed)
      if (s == a) return s;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    problem("'" + k + "' must be one of {" + list + "}, got '" + s + "'");
    return allowed.front();
  }

  std::vector<std::int64_t> integer_list(const std::string& k, std::int64_t min) {
    std::vector<std::int64_t> out;
    if (!has(k)) {
      problem("missing required key '" + k + "'");
      return out;
    }
    const json& v = j_.at(k);
    if (!v.is_array() || v.empty()) {
      problem("'" + k + "' must be a non-empty array of integers");
      return out;
    }
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < min) {
        problem("'" + k + "' entries must be integers >= " + std::to_string(min));
        return {};
      }
      out.push_back(e.get<std::int64_t>());
    }
    return out;
  }

  std::vector<double> real_list(const std::string& k, double lo, bool lo_open) {
    std::vector<double> out;
    if (!has(k)) {
      problem("missing required key '" + k + "'");
      return out;
    }
    const json& v = j_.at(k);
    if (!v.is_array() || v.empty()) {
      problem("'" + k + "' must be a non-empty array of numbers");
      return out;
    }
    for (const auto& e : v) {
      if (!e.is_number()) {
        problem("'" + k + "' entries must be numbers");
        return {};
      }
      out.push_back(check_real(k, e.get<double>(), lo, std::numeric_limits<double>::infinity(), lo_open, true));
    }
    return out;
  }

  std::vector<std::string> string_list(const std::string& k, std::vector<std::string> def,
                                       const std::vector<std::string>& allowed) {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    std::vector<std::string> out;
    if (!v.is_array() || v.empty()) {
      problem("'" + k + "' must be a non-empty array of strings");
      return def;
    }
    for (const auto& e : v) {
      bool ok = e.is_string();
      if (ok) {
        ok = false;
        for (const auto& a : allowed) ok = ok || e.get<std::string>() == a;
      }
      if (!ok) {
        problem("'" + k + "' has an entry that is not one of the allowed values");
        return def;
      }
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  /// Adds a problem for every top-level key that was never read.
  void reject_unknown() {
    if (!j_.is_object()) return;
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) problem("unknown key '" + k + "'");
  }

  void finish() {
    reject_unknown();
    if (!problems_.empty()) throw ConfigError(problems_);
  }

 private:
  template <class T>
  T missing(const std::string& k, const std::optional<T>& def, T fallback) {
    if (def) return *def;
    problem("missing required key '" + k + "'");
    return fallback;
  }

  double check_real(const std::string& k, double x, double lo, double hi, bool lo_open, bool hi_open) {
    const bool ok = std::isfinite(x) && (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
    if (!ok) {
      problem("'" + k + "' must be in " + std::string(lo_open ? "(" : "[") + num(lo) + ", " + num(hi) +
              (hi_open ? ")" : "]") + ", got " + num(x));
      return lo;
    }
    return x;
  }

  static std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    json j = x;
    return j.dump();
  }

  const json& j_;
  std::set<std::string> used_;
  std::vector<std::string> problems_;
};

}  // namespace phmc::cli

#endif  // PHMC_CLI_CONFIG_HPP
