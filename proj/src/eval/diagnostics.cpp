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
#include "purifier/eval/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "purifier/common/confidence.hpp"
#include "purifier/common/error.hpp"

namespace purifier::eval {

double Uncertainty(std::span<const double> confidence) {
  Require(confidence.size() >= 2, ErrorCode::kInvalidArgument, "uncertainty needs k >= 2");
  Require(IsOnSimplex(confidence), ErrorCode::kInvalidArgument, "uncertainty input is not on the simplex");
  double h = 0.0;
  for (double p : confidence) {
    if (p > 0.0) h -= p * std::log(p);
  }
  const double u = h / std::log(static_cast<double>(confidence.size()));
  return std::clamp(u, 0.0, 1.0);
}

std::vector<double> Histogram(std::span<const double> values, size_t bins) {
  Require(bins >= 1, ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  Require(!values.empty(), ErrorCode::kInvalidArgument, "histogram of an empty sample");
  std::vector<double> freq(bins, 0.0);
  for (double v : values) {
    Require(std::isfinite(v), ErrorCode::kNonFinite, "non-finite histogram value");
    const double c = std::clamp(v, 0.0, 1.0);
    const size_t b = std::min(bins - 1, static_cast<size_t>(c * static_cast<double>(bins)));
    freq[b] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(values.size());
  return freq;
}

HistogramGap GapBetween(std::span<const double> members, std::span<const double> nonmembers, size_t bins) {
  const auto a = Histogram(members, bins);
  const auto b = Histogram(nonmembers, bins);
  HistogramGap gap;
  double total = 0.0;
  for (size_t i = 0; i < bins; ++i) {
    const double diff = std::abs(a[i] - b[i]);
    gap.max_gap = std::max(gap.max_gap, diff);
    total += diff;
  }
  gap.avg_gap = total / static_cast<double>(bins);
  return gap;
}

namespace {

void Columns(const nn::MatrixD& conf, std::span<const int> labels, std::vector<double>& correct,
             std::vector<double>& uncertainty) {
  Require(conf.rows() == labels.size(), ErrorCode::kDimensionMismatch, "confidences and labels differ in length");
  for (size_t r = 0; r < conf.rows(); ++r) {
    const int y = labels[r];
    Require(y >= 0 && static_cast<size_t>(y) < conf.cols(), ErrorCode::kInvalidArgument, "label out of range");
    correct.push_back(conf(r, static_cast<size_t>(y)));
    uncertainty.push_back(Uncertainty(conf.row(r)));
  }
}

}  // namespace

GapStats ComputeGapStats(const nn::MatrixD& member_confidences, std::span<const int> member_labels,
                         const nn::MatrixD& nonmember_confidences, std::span<const int> nonmember_labels,
                         size_t bins) {
  std::vector<double> mc, mu, nc, nu;
  Columns(member_confidences, member_labels, mc, mu);
  Columns(nonmember_confidences, nonmember_labels, nc, nu);
  GapStats stats;
  stats.bins = bins;
  stats.confidence = GapBetween(mc, nc, bins);
  stats.uncertainty = GapBetween(mu, nu, bins);
  return stats;
}

std::string GapStatsJson(const GapStats& stats) {
  nlohmann::ordered_json j;
  j["bins"] = stats.bins;
  j["confidence"] = {{"max_gap", stats.confidence.max_gap}, {"avg_gap", stats.confidence.avg_gap}};
  j["uncertainty"] = {{"max_gap", stats.uncertainty.max_gap}, {"avg_gap", stats.uncertainty.avg_gap}};
  return j.dump(2);
}

std::vector<LatentPoint> LatentScatter(const defense::ConfidenceReformer& reformer, const nn::MatrixD& confidences,
                                       std::span<const int> labels, std::span<const int> is_member,
                                       defense::NoiseMode mode, uint64_t noise_seed) {
  Require(labels.size() == confidences.rows() && is_member.size() == confidences.rows(),
          ErrorCode::kDimensionMismatch, "scatter labels and flags must match the confidence rows");
  const auto z = reformer.SampleLatent(confidences, mode, noise_seed);
  std::vector<LatentPoint> points(z.rows());
  for (size_t r = 0; r < z.rows(); ++r) {
    points[r].x = z(r, 0);
    points[r].y = z.cols() > 1 ? z(r, 1) : 0.0;
    points[r].label = labels[r];
    points[r].is_member = is_member[r] != 0;
  }
  return points;
}

std::string LatentScatterCsv(const std::vector<LatentPoint>& points) {
  std::ostringstream out;
  out.precision(17);
  out << "x,y,label,is_member\n";
  for (const auto& p : points) out << p.x << ',' << p.y << ',' << p.label << ',' << (p.is_member ? 1 : 0) << '\n';
  return out.str();
}

double MemberDispersion(const std::vector<LatentPoint>& points) {
  std::map<int, std::pair<std::pair<double, double>, size_t>> centroids;
  for (const auto& p : points) {
    if (!p.is_member) continue;
    auto& [sum, count] = centroids[p.label];
    sum.first += p.x;
    sum.second += p.y;
    ++count;
  }
  Require(!centroids.empty(), ErrorCode::kInvalidArgument, "no member points");
  double total = 0.0;
  size_t n = 0;
  for (const auto& p : points) {
    if (!p.is_member) continue;
    const auto& [sum, count] = centroids[p.label];
    const double cx = sum.first / static_cast<double>(count);
    const double cy = sum.second / static_cast<double>(count);
    total += std::hypot(p.x - cx, p.y - cy);
    ++n;
  }
  return total / static_cast<double>(n);
}

EfficiencyRatios Efficiency(const Timings& target, const Timings& defense) {
  Require(target.train_seconds > 0.0 && target.test_seconds > 0.0, ErrorCode::kInvalidArgument,
          "efficiency needs positive baseline times");
  Require(defense.train_seconds > 0.0 && defense.test_seconds > 0.0, ErrorCode::kInvalidArgument,
          "efficiency needs positive defense times");
  return {defense.train_seconds / target.train_seconds, defense.test_seconds / target.test_seconds};
}

}  // namespace purifier::eval
