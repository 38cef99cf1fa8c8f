// Copyright 2026 The vcem Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace vcem {

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Engine seeded from a base seed plus a stream tag, so that independent
/// consumers never share RNG state.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::seed_seq::result_type words[16] = {};
  std::size_t count = 0;
  auto push = [&](std::uint64_t v) {
    words[count++] = static_cast<std::seed_seq::result_type>(v & 0xffffffffu);
    words[count++] = static_cast<std::seed_seq::result_type>(v >> 32);
  };
  push(seed);
  for (std::uint64_t v : stream) {
    if (count + 2 > 16) break;
    push(v);
  }
  std::seed_seq seq(words, words + count);
  return std::mt19937_64(seq);
}

}  // namespace vcem
