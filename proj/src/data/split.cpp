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
#include "purifier/data/split.hpp"

#include <algorithm>
#include <unordered_set>

#include "json.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/random.hpp"

namespace purifier::data {
namespace {

std::vector<size_t> Without(const std::vector<size_t>& all, const std::vector<size_t>& removed) {
  const std::unordered_set<size_t> drop(removed.begin(), removed.end());
  std::vector<size_t> out;
  for (size_t i : all) {
    if (!drop.contains(i)) out.push_back(i);
  }
  return out;
}

// Keeps `count` elements of `pool` chosen by a seeded draw, in pool order.
std::vector<size_t> DrawSubset(const std::vector<size_t>& pool, size_t count, Rng& rng) {
  auto positions = Permutation(pool.size(), rng);
  positions.resize(count);
  std::sort(positions.begin(), positions.end());
  std::vector<size_t> out;
  out.reserve(count);
  for (size_t p : positions) out.push_back(pool[p]);
  return out;
}

}  // namespace

std::vector<size_t> SplitIndices::held_out_members() const { return Without(d1, attacker_members); }

std::vector<size_t> SplitIndices::held_out_nonmembers() const { return Without(d3, attacker_nonmembers); }

SplitIndices Split(size_t dataset_size, const SplitPlan& plan) {
  const size_t needed = plan.d1 + plan.d2 + plan.d3;
  Require(needed <= dataset_size, ErrorCode::kInvalidArgument,
          "split: plan needs " + std::to_string(needed) + " rows, dataset has " + std::to_string(dataset_size));
  Require(plan.d1 > 0, ErrorCode::kInvalidArgument, "split: d1 must be non-empty");
  Require(plan.attacker_members <= plan.d1, ErrorCode::kInvalidArgument, "split: attacker members exceed d1");
  Require(plan.attacker_nonmembers <= plan.d3, ErrorCode::kInvalidArgument,
          "split: attacker non-members exceed d3");

  Rng rng(DeriveSeed(plan.seed, "split"));
  const auto order = Permutation(dataset_size, rng);
  SplitIndices s;
  auto take = [&](size_t begin, size_t count) {
    return std::vector<size_t>(order.begin() + static_cast<std::ptrdiff_t>(begin),
                               order.begin() + static_cast<std::ptrdiff_t>(begin + count));
  };
  s.d1 = take(0, plan.d1);
  s.d2 = take(plan.d1, plan.d2);
  s.d3 = take(plan.d1 + plan.d2, plan.d3);
  s.attacker_members = DrawSubset(s.d1, plan.attacker_members, rng);
  s.attacker_nonmembers = DrawSubset(s.d3, plan.attacker_nonmembers, rng);
  return s;
}

std::string SplitManifestJson(const SplitIndices& split) {
  nlohmann::json j;
  j["d1"] = split.d1;
  j["d2"] = split.d2;
  j["d3"] = split.d3;
  j["attacker_members"] = split.attacker_members;
  j["attacker_nonmembers"] = split.attacker_nonmembers;
  return j.dump(1) + "\n";
}

SplitIndices ParseSplitManifest(const std::string& json) {
  try {
    const auto j = nlohmann::json::parse(json);
    SplitIndices s;
    s.d1 = j.at("d1").get<std::vector<size_t>>();
    s.d2 = j.at("d2").get<std::vector<size_t>>();
    s.d3 = j.at("d3").get<std::vector<size_t>>();
    s.attacker_members = j.at("attacker_members").get<std::vector<size_t>>();
    s.attacker_nonmembers = j.at("attacker_nonmembers").get<std::vector<size_t>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("split manifest: ") + e.what());
  }
}

MembershipSet BalancedMembership(const std::vector<size_t>& members, const std::vector<size_t>& nonmembers) {
  const size_t n = std::min(members.size(), nonmembers.size());
  Require(n > 0, ErrorCode::kInvalidArgument, "membership evaluation needs members and non-members");
  MembershipSet set;
  for (size_t i = 0; i < n; ++i) {
    set.rows.push_back(members[i]);
    set.is_member.push_back(1);
  }
  for (size_t i = 0; i < n; ++i) {
    set.rows.push_back(nonmembers[i]);
    set.is_member.push_back(0);
  }
  return set;
}

}  // namespace purifier::data
