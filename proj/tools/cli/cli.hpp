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

#ifndef PHMC_CLI_CLI_HPP
#define PHMC_CLI_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace phmc::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

/// Runs the command line `args` (without the program name). Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Median and sample standard deviation (0 for a single value).
double median(std::vector<double> x);
double sample_sd(const std::vector<double>& x);

}  // namespace phmc::cli

#endif  // PHMC_CLI_CLI_HPP
