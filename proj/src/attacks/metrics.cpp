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
#include "purifier/attacks/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "purifier/common/error.hpp"

namespace purifier::attacks {
namespace {

void CheckInputs(std::span<const double> scores, std::span<const int> is_member) {
  Require(scores.size() == is_member.size(), ErrorCode::kDimensionMismatch, "scores and labels differ in length");
  Require(!scores.empty(), ErrorCode::kInvalidArgument, "no scores");
  for (double s : scores) Require(std::isfinite(s), ErrorCode::kNonFinite, "non-finite attack score");
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const int> is_member) {
  CheckInputs(scores, is_member);
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  size_t positives = 0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t t = i; t < j; ++t) {
      if (is_member[order[t]] != 0) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    }
    i = j;
  }
  const size_t negatives = scores.size() - positives;
  Require(positives > 0 && negatives > 0, ErrorCode::kInvalidArgument, "AUC needs both classes");
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

double ThresholdAccuracy(std::span<const double> scores, std::span<const int> is_member, double threshold) {
  CheckInputs(scores, is_member);
  size_t hits = 0;
  for (size_t i = 0; i < scores.size(); ++i) hits += (scores[i] >= threshold) == (is_member[i] != 0);
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double BestThreshold(std::span<const double> scores, std::span<const int> is_member) {
  CheckInputs(scores, is_member);
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> candidates{sorted.front() - 1.0};
  for (size_t i = 1; i < sorted.size(); ++i) candidates.push_back(0.5 * (sorted[i - 1] + sorted[i]));
  candidates.push_back(sorted.back() + 1.0);
  double best = candidates.front();
  double best_acc = -1.0;
  for (double t : candidates) {
    const double acc = ThresholdAccuracy(scores, is_member, t);
    if (acc > best_acc) {
      best_acc = acc;
      best = t;
    }
  }
  return best;
}

}  // namespace purifier::attacks
