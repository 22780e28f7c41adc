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

#ifndef PHMC_RANDOM_HPP
#define PHMC_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace phmc {

using Rng = std::mt19937_64;
using RngSeed = std::uint64_t;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes a seed and a path of keys into an independent stream seed. Streams derived
/// from different key paths are treated as independent.
inline RngSeed derive_seed(RngSeed seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_stream(RngSeed seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(derive_seed(seed, keys));
}

/// Substream roles used by the samplers.
enum class StreamRole : std::uint64_t {
  kChain = 1,
  kMomentum,
  kAccept,
  kProposal,
  kFilterInitial,
  kFilterStep,
  kFilterFinal,
  kFilterCurrent,
  kInit,
};

inline std::uint64_t key(StreamRole r) noexcept { return static_cast<std::uint64_t>(r); }

}  // namespace phmc

#endif  // PHMC_RANDOM_HPP
