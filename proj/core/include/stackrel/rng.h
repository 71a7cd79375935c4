// Copyright 2026 The Stackrel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STACKREL_RNG_H_
#define STACKREL_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace stackrel {

using Rng = std::mt19937_64;

// All randomness descends from one 64-bit seed through named sub-streams
// ("scene", "render", "train", "embed", ...). The same (seed, stream, index)
// always yields the same child seed, independent of call order.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream,
                         std::uint64_t index = 0);

inline Rng MakeRng(std::uint64_t seed, std::string_view stream,
                   std::uint64_t index = 0) {
  return Rng(DeriveSeed(seed, stream, index));
}

// FNV-1a; stable across platforms, used for hashing view ids into seeds.
std::uint64_t StableHash(std::string_view text);

}  // namespace stackrel

#endif  // STACKREL_RNG_H_
