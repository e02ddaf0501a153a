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
#ifndef PURIFIER_EVAL_DIAGNOSTICS_HPP_
#define PURIFIER_EVAL_DIAGNOSTICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "purifier/defense/reformer.hpp"
#include "purifier/nn/matrix.hpp"

namespace purifier::eval {

inline constexpr size_t kDefaultHistogramBins = 20;

// Normalized entropy in [0,1]. Requires k >= 2 and a simplex row.
double Uncertainty(std::span<const double> confidence);

// Frequencies over `bins` equal bins on [0,1], summing to 1. Values are
// clamped into the unit interval; 1.0 falls in the last bin.
std::vector<double> Histogram(std::span<const double> values, size_t bins);

struct HistogramGap {
  double max_gap = 0.0;
  double avg_gap = 0.0;
};

// Per-bin absolute frequency differences of the two normalized histograms.
HistogramGap GapBetween(std::span<const double> members, std::span<const double> nonmembers, size_t bins);

struct GapStats {
  size_t bins = kDefaultHistogramBins;
  HistogramGap confidence;   // confidence in the correct class
  HistogramGap uncertainty;  // normalized entropy
};

GapStats ComputeGapStats(const nn::MatrixD& member_confidences, std::span<const int> member_labels,
                         const nn::MatrixD& nonmember_confidences, std::span<const int> nonmember_labels,
                         size_t bins = kDefaultHistogramBins);

std::string GapStatsJson(const GapStats& stats);

struct LatentPoint {
  double x = 0.0;
  double y = 0.0;
  int label = 0;
  bool is_member = false;
};

// Encoder latents projected onto the first two dims (a 1-d latent gets y = 0).
// kZero gives the raw means, kSample the noisy latents used when purifying.
std::vector<LatentPoint> LatentScatter(const defense::ConfidenceReformer& reformer, const nn::MatrixD& confidences,
                                       std::span<const int> labels, std::span<const int> is_member,
                                       defense::NoiseMode mode, uint64_t noise_seed);

// Columns x,y,label,is_member with a header row.
std::string LatentScatterCsv(const std::vector<LatentPoint>& points);

// Mean L2 distance of member points to their class centroid.
double MemberDispersion(const std::vector<LatentPoint>& points);

struct Timings {
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

struct EfficiencyRatios {
  double train_ratio = 0.0;
  double test_ratio = 0.0;
};

EfficiencyRatios Efficiency(const Timings& target, const Timings& defense);

}  // namespace purifier::eval

#endif  // PURIFIER_EVAL_DIAGNOSTICS_HPP_
