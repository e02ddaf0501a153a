// Copyright 2026 The Purifier Authors
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
#ifndef PURIFIER_COMMON_RANDOM_HPP_
#define PURIFIER_COMMON_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace purifier {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent child seeds.
constexpr uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for a named stream, stable across runs and platforms.
uint64_t DeriveSeed(uint64_t base, std::string_view tag);

// FNV-1a over raw bytes.
uint64_t HashBytes(std::span<const std::byte> bytes, uint64_t basis = 0xcbf29ce484222325ULL);

template <typename T>
uint64_t HashValues(std::span<const T> values, uint64_t basis = 0xcbf29ce484222325ULL) {
  return HashBytes(std::as_bytes(values), basis);
}

// Fisher-Yates with an explicit engine so results do not depend on std::shuffle.
template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::vector<size_t> Permutation(size_t n, Rng& rng);

}  // namespace purifier

#endif  // PURIFIER_COMMON_RANDOM_HPP_
