/*
   Copyright 2026 The ibmfg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <random>

namespace ibmfg {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Sub-streams of one Monte Carlo path.
enum class Stream : std::uint64_t {
  kInitial = 1,
  kBrownian = 2,
  kPoisson = 3,
};

// Seed of sub-stream `stream` of path `path` under master seed `seed`.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t path,
                                    Stream stream) {
  return mix64(mix64(mix64(seed) ^ path) ^ static_cast<std::uint64_t>(stream));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t path,
                                   Stream stream) {
  return std::mt19937_64(stream_seed(seed, path, stream));
}

}  // namespace ibmfg
