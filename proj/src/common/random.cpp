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
#include "purifier/common/random.hpp"

#include <numeric>

namespace purifier {

uint64_t DeriveSeed(uint64_t base, std::string_view tag) {
  const uint64_t tag_hash = HashBytes(std::as_bytes(std::span(tag.data(), tag.size())));
  return MixSeed(MixSeed(base) ^ tag_hash);
}

uint64_t HashBytes(std::span<const std::byte> bytes, uint64_t basis) {
  uint64_t h = basis;
  for (std::byte b : bytes) {
    h ^= static_cast<uint64_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<size_t> Permutation(size_t n, Rng& rng) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Shuffle(order, rng);
  return order;
}

}  // namespace purifier
