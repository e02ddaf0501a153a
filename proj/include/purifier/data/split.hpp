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
#ifndef PURIFIER_DATA_SPLIT_HPP_
#define PURIFIER_DATA_SPLIT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "purifier/data/dataset.hpp"

namespace purifier::data {

// Sizes of the target training set (d1), the defender's reference set (d2),
// the test set (d3), and the attacker's known member / non-member subsets.
struct SplitPlan {
  size_t d1 = 0;
  size_t d2 = 0;
  size_t d3 = 0;
  size_t attacker_members = 0;
  size_t attacker_nonmembers = 0;
  uint64_t seed = 0;
};

// Row indices into the source dataset.
struct SplitIndices {
  std::vector<size_t> d1;
  std::vector<size_t> d2;
  std::vector<size_t> d3;
  std::vector<size_t> attacker_members;     // subset of d1, in d1 order
  std::vector<size_t> attacker_nonmembers;  // subset of d3, in d3 order

  // d1 \ attacker_members and d3 \ attacker_nonmembers.
  std::vector<size_t> held_out_members() const;
  std::vector<size_t> held_out_nonmembers() const;

  bool operator==(const SplitIndices&) const = default;
};

SplitIndices Split(size_t dataset_size, const SplitPlan& plan);

std::string SplitManifestJson(const SplitIndices& split);
SplitIndices ParseSplitManifest(const std::string& json);

// Balanced labelled pool for membership evaluation.
struct MembershipSet {
  std::vector<size_t> rows;
  std::vector<int> is_member;
};

// Equal numbers of members and non-members (the larger side is truncated).
MembershipSet BalancedMembership(const std::vector<size_t>& members, const std::vector<size_t>& nonmembers);

}  // namespace purifier::data

#endif  // PURIFIER_DATA_SPLIT_HPP_
