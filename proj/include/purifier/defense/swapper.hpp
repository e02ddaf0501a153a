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
#ifndef PURIFIER_DEFENSE_SWAPPER_HPP_
#define PURIFIER_DEFENSE_SWAPPER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "purifier/common/confidence.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/nn/matrix.hpp"
#include "purifier/nn/mlp.hpp"

namespace purifier::defense {

// (acc_train - acc_test) / acc_train clamped to [0, 1].
double ComputeSwapRate(double acc_train, double acc_test);

// round-half-up of p_swap * population.
size_t SwapCount(double p_swap, size_t population);

struct SwapPlan {
  double p_swap = 0.0;
  std::vector<size_t> members;  // positions within D1, ascending
  uint64_t seed = 0;

  bool operator==(const SwapPlan&) const = default;
};

SwapPlan MakeSwapPlan(double p_swap, size_t d1_size, uint64_t seed);

struct Neighbor {
  size_t entry = 0;
  double distance = 0.0;

  bool operator==(const Neighbor&) const = default;
};

double L2Distance(std::span<const double> a, std::span<const double> b);

// Exact L2 nearest-neighbour index over stored confidences (vantage-point tree).
// Entries are held at 32-bit precision so the on-disk form is lossless.
class PredictionIndex {
 public:
  PredictionIndex() = default;
  PredictionIndex(nn::MatrixD entries, size_t k_nn, double tau);

  size_t size() const { return entries_.rows(); }
  size_t dim() const { return entries_.cols(); }
  size_t k_nn() const { return k_nn_; }
  double tau() const { return tau_; }
  const nn::MatrixD& entries() const { return entries_; }

  // Sorted by (distance, entry).
  std::vector<Neighbor> Nearest(std::span<const double> query, size_t count) const;
  std::vector<Neighbor> NearestBruteForce(std::span<const double> query, size_t count) const;

  bool operator==(const PredictionIndex& other) const {
    return entries_ == other.entries_ && k_nn_ == other.k_nn_ && tau_ == other.tau_;
  }

 private:
  struct Node {
    size_t entry = 0;
    double radius = 0.0;
    int64_t inside = -1;
    int64_t outside = -1;
  };

  int64_t Build(std::vector<size_t>& items, size_t lo, size_t hi);
  void Search(int64_t node, std::span<const double> query, size_t count, std::vector<Neighbor>& best) const;

  nn::MatrixD entries_;
  size_t k_nn_ = 1;
  double tau_ = 0.0;
  std::vector<Node> nodes_;
  int64_t root_ = -1;
};

// True iff the nearest of the k_nn neighbours lies within tau. Empty index: false.
bool MatchMember(const PredictionIndex& index, std::span<const double> c);
bool MatchMemberBruteForce(const PredictionIndex& index, std::span<const double> c);

// Stores the original target confidences of the swap members.
PredictionIndex BuildIndex(const nn::Mlp<double>& target, const data::Dataset& d1, const SwapPlan& plan,
                           size_t k_nn, double tau);

// Smallest threshold covering repeated self-queries of the stored members:
// max(floor, margin * 99.9th percentile of nearest distances).
double CalibrateTau(const PredictionIndex& index, const nn::MatrixD& recomputed, double floor, double margin = 2.0);

// Exchanges the top-1 and top-2 entries; ties resolve toward the lower index.
ConfidenceVector SwapLabel(const ConfidenceVector& p);
void SwapLabelInPlace(std::span<double> p);

}  // namespace purifier::defense

#endif  // PURIFIER_DEFENSE_SWAPPER_HPP_
