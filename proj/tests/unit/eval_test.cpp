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
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "purifier/common/error.hpp"
#include "purifier/common/random.hpp"
#include "purifier/defense/reformer.hpp"
#include "purifier/eval/diagnostics.hpp"
#include "purifier/eval/report.hpp"

namespace purifier::eval {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

std::vector<double> RandomSimplex(size_t k, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (double& v : p) s += (v = e(rng));
  for (double& v : p) v /= s;
  return p;
}

TEST(Uncertainty, Examples) {
  EXPECT_DOUBLE_EQ(Uncertainty(std::vector<double>{0.0, 1.0, 0.0}), 0.0);
  EXPECT_NEAR(Uncertainty(std::vector<double>(7, 1.0 / 7.0)), 1.0, 1e-12);
  EXPECT_NEAR(Uncertainty(std::vector<double>{0.5, 0.5, 0.0, 0.0}), 0.5, 1e-12);
}

TEST(Uncertainty, RejectsBadInput) {
  EXPECT_EQ(CodeOf([] { Uncertainty(std::vector<double>{1.0}); }), ErrorCode::kInvalidArgument);
  EXPECT_NE(CodeOf([] { Uncertainty(std::vector<double>{0.7, 0.7}); }), static_cast<ErrorCode>(0));
}

TEST(Uncertainty, PermutationInvariantAndBounded) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = RandomSimplex(2 + static_cast<size_t>(trial % 9), rng);
    const double u = Uncertainty(p);
    EXPECT_GE(u, 0.0);
    EXPECT_LE(u, 1.0);
    Shuffle(p, rng);
    EXPECT_NEAR(Uncertainty(p), u, 1e-12);
  }
}

TEST(Histogram, NormalizedWithEdgeBins) {
  const auto h = Histogram(std::vector<double>{0.0, 0.04, 0.5, 1.0}, 10);
  ASSERT_EQ(h.size(), 10u);
  EXPECT_DOUBLE_EQ(h[0], 0.5);
  EXPECT_DOUBLE_EQ(h[5], 0.25);
  EXPECT_DOUBLE_EQ(h[9], 0.25);
  EXPECT_EQ(CodeOf([] { Histogram(std::vector<double>{}, 10); }), ErrorCode::kInvalidArgument);
}

TEST(GapStatsTest, IdenticalSamplesHaveNoGap) {
  const std::vector<double> v{0.1, 0.2, 0.95, 0.5};
  const auto g = GapBetween(v, v, kDefaultHistogramBins);
  EXPECT_DOUBLE_EQ(g.max_gap, 0.0);
  EXPECT_DOUBLE_EQ(g.avg_gap, 0.0);
}

TEST(GapStatsTest, DisjointSingleBinMassesHaveMaxOne) {
  const auto g = GapBetween(std::vector<double>(5, 0.99), std::vector<double>(3, 0.01), kDefaultHistogramBins);
  EXPECT_DOUBLE_EQ(g.max_gap, 1.0);
  EXPECT_DOUBLE_EQ(g.avg_gap, 2.0 / 20.0);
}

TEST(GapStatsTest, SymmetricBoundedAndAvgBelowMax) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(1 + trial % 17), b(1 + trial % 5);
    for (double& v : a) v = u(rng) * u(rng);
    for (double& v : b) v = u(rng);
    const auto ab = GapBetween(a, b, kDefaultHistogramBins);
    const auto ba = GapBetween(b, a, kDefaultHistogramBins);
    EXPECT_DOUBLE_EQ(ab.max_gap, ba.max_gap);
    EXPECT_DOUBLE_EQ(ab.avg_gap, ba.avg_gap);
    EXPECT_LE(ab.avg_gap, ab.max_gap);
    EXPECT_GE(ab.avg_gap, 0.0);
    EXPECT_LE(ab.max_gap, 1.0);
  }
}

TEST(GapStatsTest, UsesCorrectClassConfidence) {
  // Members are confident in their label, non-members in another class.
  nn::MatrixD m(2, 2), n(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  n(0, 1) = 1.0;
  n(1, 0) = 1.0;
  const std::vector<int> labels{0, 1};
  const auto s = ComputeGapStats(m, labels, n, labels);
  EXPECT_DOUBLE_EQ(s.confidence.max_gap, 1.0);
  EXPECT_DOUBLE_EQ(s.uncertainty.max_gap, 0.0);
  const auto j = nlohmann::json::parse(GapStatsJson(s));
  EXPECT_TRUE(j.contains("confidence"));
  EXPECT_TRUE(j.contains("uncertainty"));
  EXPECT_EQ(CodeOf([&] { ComputeGapStats(nn::MatrixD(0, 2), {}, n, labels); }), ErrorCode::kInvalidArgument);
}

defense::ConfidenceReformer SmallReformer(size_t k, size_t latent, double sigma) {
  auto enc = nn::Mlp<float>::Initialize(
      nn::ChainSpecs(std::vector<size_t>{2 * k, 8, latent}, nn::Activation::kRelu, nn::Activation::kIdentity), 1, 0.5);
  auto dec = nn::Mlp<float>::Initialize(
      nn::ChainSpecs(std::vector<size_t>{latent + k, 8, k}, nn::Activation::kRelu, nn::Activation::kSoftmax), 2, 0.5);
  return defense::ConfidenceReformer(std::move(enc), std::move(dec), sigma);
}

nn::MatrixD Confidences(size_t rows, size_t k, uint64_t seed) {
  Rng rng(seed);
  nn::MatrixD c(rows, k);
  for (size_t r = 0; r < rows; ++r) {
    const auto p = RandomSimplex(k, rng);
    std::copy(p.begin(), p.end(), c.row(r).begin());
  }
  return c;
}

TEST(LatentScatterTest, TwoDimLatentGivesRawMeans) {
  const auto reformer = SmallReformer(4, 2, 0.3);
  const auto c = Confidences(30, 4, 7);
  std::vector<int> labels(30, 1), member(30, 0);
  member[3] = 1;
  const auto points = LatentScatter(reformer, c, labels, member, defense::NoiseMode::kZero, 0);
  const auto means = reformer.EncodeMeans(c, defense::ArgMaxRows(c));
  ASSERT_EQ(points.size(), 30u);
  for (size_t r = 0; r < 30; ++r) {
    EXPECT_DOUBLE_EQ(points[r].x, means(r, 0));
    EXPECT_DOUBLE_EQ(points[r].y, means(r, 1));
    EXPECT_EQ(points[r].label, 1);
    EXPECT_EQ(points[r].is_member, r == 3);
  }
}

TEST(LatentScatterTest, IdenticalInputsGiveIdenticalPoints) {
  const auto reformer = SmallReformer(3, 3, 0.3);
  nn::MatrixD c(4, 3);
  for (size_t r = 0; r < 4; ++r) {
    c(r, 0) = 0.2;
    c(r, 1) = 0.7;
    c(r, 2) = 0.1;
  }
  const std::vector<int> labels(4, 1), member(4, 1);
  for (auto mode : {defense::NoiseMode::kZero, defense::NoiseMode::kSample}) {
    const auto p = LatentScatter(reformer, c, labels, member, mode, 9);
    for (size_t r = 1; r < 4; ++r) {
      EXPECT_EQ(p[r].x, p[0].x);
      EXPECT_EQ(p[r].y, p[0].y);
    }
  }
}

TEST(LatentScatterTest, OneDimLatentHasZeroY) {
  const auto reformer = SmallReformer(3, 1, 0.0);
  const auto c = Confidences(5, 3, 8);
  const std::vector<int> labels(5, 0), member(5, 0);
  for (const auto& p : LatentScatter(reformer, c, labels, member, defense::NoiseMode::kZero, 0)) {
    EXPECT_EQ(p.y, 0.0);
  }
}

TEST(LatentScatterTest, CsvHasHeaderAndRows) {
  const std::vector<LatentPoint> pts{{0.5, -1.0, 2, true}, {0.0, 0.25, 0, false}};
  const auto csv = LatentScatterCsv(pts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y,label,is_member");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Dispersion, MeanDistanceToClassCentroid) {
  // Class 0 members at (0,0),(2,0): centroid (1,0), distances 1,1.
  // Class 1 members at (0,0),(0,4): centroid (0,2), distances 2,2.
  // The non-member is ignored.
  const std::vector<LatentPoint> pts{
      {0, 0, 0, true}, {2, 0, 0, true}, {0, 0, 1, true}, {0, 4, 1, true}, {50, 50, 0, false}};
  EXPECT_DOUBLE_EQ(MemberDispersion(pts), 1.5);
}

TEST(Dispersion, NoiseSpreadsMembers) {
  const auto reformer = SmallReformer(4, 2, 0.5);
  const auto c = Confidences(200, 4, 10);
  const auto labels = defense::ArgMaxRows(c);
  const std::vector<int> member(200, 1);
  const double zero = MemberDispersion(LatentScatter(reformer, c, labels, member, defense::NoiseMode::kZero, 0));
  const double noisy = MemberDispersion(LatentScatter(reformer, c, labels, member, defense::NoiseMode::kSample, 4));
  EXPECT_GT(noisy, zero);
}

TEST(EfficiencyTest, RatiosAndZeroBaseline) {
  const auto same = Efficiency({2.0, 0.5}, {2.0, 0.5});
  EXPECT_DOUBLE_EQ(same.train_ratio, 1.0);
  EXPECT_DOUBLE_EQ(same.test_ratio, 1.0);
  const auto r = Efficiency({4.0, 0.1}, {1.0, 1.8});
  EXPECT_DOUBLE_EQ(r.train_ratio, 0.25);
  EXPECT_DOUBLE_EQ(r.test_ratio, 18.0);
  EXPECT_EQ(CodeOf([] { Efficiency({0.0, 1.0}, {1.0, 1.0}); }), ErrorCode::kInvalidArgument);
}

ArmReport FullArm(const std::string& arm, const std::vector<std::string>& attacks) {
  ArmReport r;
  r.arm = arm;
  r.acc_train = 0.9;
  r.acc_test = 0.85;
  double v = 0.5;
  for (const auto& a : attacks) r.attacks[a] = {v += 0.01, 0.5, 0.5};
  r.inversion_error = 0.03;
  return r;
}

const std::vector<std::string> kFive{"nsh", "mlleaks", "adaptive", "blindmi", "gap"};

TEST(Report, TwoArmsFiveAttacksGiveTenCells) {
  const auto report = AssembleReport(1, {"none", "full"}, kFive, {FullArm("none", kFive), FullArm("full", kFive)});
  EXPECT_EQ(PresentCells(report), 10u);
  const auto j = nlohmann::json::parse(ReportJson(report));
  EXPECT_EQ(j.at("arms").size(), 2u);
  EXPECT_EQ(j.at("arms")[0].at("boundary"), "not implemented");
}

TEST(Report, MissingCellsAreMarkedAbsent) {
  auto partial = FullArm("full", {"nsh"});
  partial.acc_train.reset();
  const auto report = AssembleReport(1, {"none", "full"}, kFive, {FullArm("none", kFive), partial});
  EXPECT_EQ(PresentCells(report), 6u);
  const auto json = ReportJson(report);
  const auto csv = ReportCsv(report);
  EXPECT_NE(json.find(kAbsent), std::string::npos);
  // A never-reported arm still gets its row.
  const auto only_none = AssembleReport(1, {"none", "full"}, kFive, {FullArm("none", kFive)});
  const auto csv2 = ReportCsv(only_none);
  EXPECT_EQ(std::count(csv2.begin(), csv2.end(), '\n'), 3);
  EXPECT_NE(csv2.find("full,absent,absent"), std::string::npos);
  // Four of the five attacks are absent on the partial row.
  const auto row = csv.substr(csv.find("\nfull,") + 1);
  EXPECT_GE(std::count(row.begin(), row.end(), 'a'), 4 * 2);
}

TEST(Report, RejectsUnconfiguredCells) {
  EXPECT_EQ(CodeOf([] { AssembleReport(1, {"none"}, kFive, {FullArm("full", kFive)}); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { AssembleReport(1, {"none"}, {"nsh"}, {FullArm("none", {"nsh", "gap"})}); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { AssembleReport(1, {"none"}, {"nsh"}, {FullArm("none", {"nsh"}), FullArm("none", {"nsh"})}); }),
            ErrorCode::kConfig);
}

TEST(Report, SameInputsGiveSameBytes) {
  const auto build = [] {
    auto arm = FullArm("none", kFive);
    GapStats g;
    g.confidence = {0.4, 0.1};
    g.uncertainty = {0.3, 0.05};
    arm.gap_stats = g;
    arm.attribute_accuracy = 0.31;
    auto report = AssembleReport(42, {"none", "reformer", "full"}, kFive,
                                 {arm, FullArm("reformer", kFive), FullArm("full", kFive)});
    report.latent_dispersion_ratio = 1.7;
    report.latent_scatter = "latent_seed42.csv";
    return std::make_pair(ReportJson(report), ReportCsv(report));
  };
  EXPECT_EQ(build(), build());
}

TEST(Report, AblationMatrixHasThreeArms) {
  const auto report = AssembleReport(3, {"none", "reformer", "full"}, {"transfer"},
                                     {FullArm("none", {"transfer"}), FullArm("reformer", {"transfer"}),
                                      FullArm("full", {"transfer"})});
  const auto j = nlohmann::json::parse(ReportJson(report));
  ASSERT_EQ(j.at("arms").size(), 3u);
  const auto csv = ReportCsv(report);
  for (const char* arm : {"\nnone,", "\nreformer,", "\nfull,"}) EXPECT_NE(csv.find(arm), std::string::npos);
}

TEST(Report, CellOfCopiesHeadlineNumbers) {
  attacks::MembershipAttackResult r;
  r.accuracy = 0.61;
  r.auc = 0.66;
  r.threshold = 0.4;
  const auto cell = CellOf(r);
  EXPECT_EQ(cell.accuracy, 0.61);
  EXPECT_EQ(cell.auc, 0.66);
  EXPECT_EQ(cell.threshold, 0.4);
  const auto t = nlohmann::json::parse(TimingsJson({1.0, 2.0}, {0.5, 4.0}));
  EXPECT_FALSE(t.empty());
}

}  // namespace
}  // namespace purifier::eval
