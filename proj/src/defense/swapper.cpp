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
#include "purifier/defense/swapper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "purifier/classifier/target.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/random.hpp"

namespace purifier::defense {

double ComputeSwapRate(double acc_train, double acc_test) {
  Require(acc_train > 0.0 && acc_train <= 1.0, ErrorCode::kInvalidArgument, "acc_train must lie in (0, 1]");
  Require(acc_test >= 0.0 && acc_test <= 1.0, ErrorCode::kInvalidArgument, "acc_test must lie in [0, 1]");
  return std::clamp((acc_train - acc_test) / acc_train, 0.0, 1.0);
}

size_t SwapCount(double p_swap, size_t population) {
  Require(p_swap >= 0.0 && p_swap <= 1.0, ErrorCode::kInvalidArgument, "p_swap must lie in [0, 1]");
  return std::min(population, static_cast<size_t>(std::floor(p_swap * static_cast<double>(population) + 0.5)));
}

SwapPlan MakeSwapPlan(double p_swap, size_t d1_size, uint64_t seed) {
  SwapPlan plan;
  plan.p_swap = p_swap;
  plan.seed = seed;
  Rng rng(DeriveSeed(seed, "swap-plan"));
  auto order = Permutation(d1_size, rng);
  order.resize(SwapCount(p_swap, d1_size));
  std::sort(order.begin(), order.end());
  plan.members = std::move(order);
  return plan;
}

double L2Distance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return std::sqrt(total);
}

namespace {

bool Closer(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.entry < b.entry);
}

void Offer(std::vector<Neighbor>& best, size_t count, Neighbor candidate) {
  if (best.size() == count && !Closer(candidate, best.back())) return;
  best.insert(std::upper_bound(best.begin(), best.end(), candidate, Closer), candidate);
  if (best.size() > count) best.pop_back();
}

}  // namespace

PredictionIndex::PredictionIndex(nn::MatrixD entries, size_t k_nn, double tau)
    : entries_(std::move(entries)), k_nn_(k_nn), tau_(tau) {
  Require(k_nn_ >= 1, ErrorCode::kInvalidArgument, "k_nn must be >= 1");
  Require(tau_ >= 0.0 && std::isfinite(tau_), ErrorCode::kInvalidArgument, "tau must be finite and >= 0");
  Require(entries_.AllFinite(), ErrorCode::kNonFinite, "index entries must be finite");
  for (double& v : entries_.values()) v = static_cast<double>(static_cast<float>(v));
  std::vector<size_t> items(entries_.rows());
  for (size_t i = 0; i < items.size(); ++i) items[i] = i;
  nodes_.reserve(items.size());
  root_ = Build(items, 0, items.size());
}

int64_t PredictionIndex::Build(std::vector<size_t>& items, size_t lo, size_t hi) {
  if (lo >= hi) return -1;
  const int64_t id = static_cast<int64_t>(nodes_.size());
  nodes_.push_back({items[lo], 0.0, -1, -1});
  if (hi - lo == 1) return id;
  const auto vantage = entries_.row(items[lo]);
  std::vector<std::pair<double, size_t>> ranked;
  ranked.reserve(hi - lo - 1);
  for (size_t i = lo + 1; i < hi; ++i) ranked.emplace_back(L2Distance(vantage, entries_.row(items[i])), items[i]);
  const size_t mid = ranked.size() / 2;
  std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(mid), ranked.end());
  const double radius = ranked[mid].first;
  // inside: distance < radius; outside: distance >= radius.
  std::stable_partition(ranked.begin(), ranked.end(), [radius](const auto& e) { return e.first < radius; });
  size_t split = 0;
  while (split < ranked.size() && ranked[split].first < radius) ++split;
  for (size_t i = 0; i < ranked.size(); ++i) items[lo + 1 + i] = ranked[i].second;
  const size_t boundary = lo + 1 + split;
  nodes_[static_cast<size_t>(id)].radius = radius;
  const int64_t inside = Build(items, lo + 1, boundary);
  const int64_t outside = Build(items, boundary, hi);
  nodes_[static_cast<size_t>(id)].inside = inside;
  nodes_[static_cast<size_t>(id)].outside = outside;
  return id;
}

void PredictionIndex::Search(int64_t node_id, std::span<const double> query, size_t count,
                             std::vector<Neighbor>& best) const {
  if (node_id < 0) return;
  const Node& node = nodes_[static_cast<size_t>(node_id)];
  const double d = L2Distance(query, entries_.row(node.entry));
  Offer(best, count, {node.entry, d});
  const auto bound = [&] { return best.size() < count ? INFINITY : best.back().distance; };
  if (d < node.radius) {
    Search(node.inside, query, count, best);
    if (d + bound() >= node.radius) Search(node.outside, query, count, best);
  } else {
    Search(node.outside, query, count, best);
    if (d - bound() <= node.radius) Search(node.inside, query, count, best);
  }
}

std::vector<Neighbor> PredictionIndex::Nearest(std::span<const double> query, size_t count) const {
  Require(query.size() == dim() || size() == 0, ErrorCode::kDimensionMismatch,
          "query dim " + std::to_string(query.size()) + " != index dim " + std::to_string(dim()));
  std::vector<Neighbor> best;
  if (count == 0) return best;
  Search(root_, query, count, best);
  return best;
}

std::vector<Neighbor> PredictionIndex::NearestBruteForce(std::span<const double> query, size_t count) const {
  Require(query.size() == dim() || size() == 0, ErrorCode::kDimensionMismatch, "query dim mismatch");
  std::vector<Neighbor> best;
  if (count == 0) return best;
  for (size_t i = 0; i < size(); ++i) Offer(best, count, {i, L2Distance(query, entries_.row(i))});
  return best;
}

bool MatchMember(const PredictionIndex& index, std::span<const double> c) {
  if (index.size() == 0) return false;
  const auto nearest = index.Nearest(c, index.k_nn());
  return nearest.front().distance <= index.tau();
}

bool MatchMemberBruteForce(const PredictionIndex& index, std::span<const double> c) {
  if (index.size() == 0) return false;
  const auto nearest = index.NearestBruteForce(c, index.k_nn());
  return nearest.front().distance <= index.tau();
}

PredictionIndex BuildIndex(const nn::Mlp<double>& target, const data::Dataset& d1, const SwapPlan& plan,
                           size_t k_nn, double tau) {
  Require(!plan.members.empty() || SwapCount(plan.p_swap, d1.size()) == 0, ErrorCode::kInvalidArgument,
          "empty swap set with p_swap > 0");
  for (size_t i : plan.members) {
    Require(i < d1.size(), ErrorCode::kInvalidArgument, "swap member " + std::to_string(i) + " outside D1");
  }
  if (plan.members.empty()) return PredictionIndex(nn::MatrixD(0, d1.num_classes()), k_nn, tau);
  const auto inputs = nn::SelectRows(d1.features(), plan.members);
  return PredictionIndex(classifier::PredictConfidences(target, inputs), k_nn, tau);
}

double CalibrateTau(const PredictionIndex& index, const nn::MatrixD& recomputed, double floor, double margin) {
  Require(floor >= 0.0 && margin >= 0.0, ErrorCode::kInvalidArgument, "floor and margin must be >= 0");
  if (recomputed.rows() == 0 || index.size() == 0) return floor;
  std::vector<double> distances(recomputed.rows());
  for (size_t r = 0; r < recomputed.rows(); ++r) distances[r] = index.Nearest(recomputed.row(r), 1).front().distance;
  std::sort(distances.begin(), distances.end());
  const size_t rank = static_cast<size_t>(std::ceil(0.999 * static_cast<double>(distances.size()))) - 1;
  return std::max(floor, margin * distances[std::min(rank, distances.size() - 1)]);
}

void SwapLabelInPlace(std::span<double> p) {
  Require(p.size() >= 2, ErrorCode::kInvalidArgument, "swap needs at least two classes");
  size_t top1 = nn::ArgMax(std::span<const double>(p));
  size_t top2 = top1 == 0 ? 1 : 0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i != top1 && p[i] > p[top2]) top2 = i;
  }
  std::swap(p[top1], p[top2]);
}

ConfidenceVector SwapLabel(const ConfidenceVector& p) {
  std::vector<double> out(p.probs().begin(), p.probs().end());
  SwapLabelInPlace(out);
  return ConfidenceVector(std::move(out));
}

}  // namespace purifier::defense
