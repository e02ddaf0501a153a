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
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "purifier/common/error.hpp"
#include "purifier/data/csv.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/data/split.hpp"
#include "purifier/data/synth.hpp"
#include "purifier/nn/mlp.hpp"
#include "purifier/nn/train.hpp"

namespace purifier::data {
namespace {

SynthSpec TwoBlobs(uint64_t seed) {
  SynthSpec spec;
  spec.num_points = 100;
  spec.num_classes = 2;
  spec.feature_dim = 2;
  spec.separation = 1.0;
  spec.stddev = 0.1;
  spec.seed = seed;
  return spec;
}

SynthSpec PurchaseLike(uint64_t seed) {
  SynthSpec spec;
  spec.num_points = 600;
  spec.num_classes = 20;
  spec.feature_dim = 64;
  spec.model = FeatureModel::kBernoulli;
  spec.family_size = 2;
  spec.seed = seed;
  return spec;
}

TEST(SynthTest, SameSeedIsDeterministic) {
  EXPECT_EQ(Synthesize(PurchaseLike(3)), Synthesize(PurchaseLike(3)));
  EXPECT_FALSE(Synthesize(PurchaseLike(3)) == Synthesize(PurchaseLike(4)));
}

TEST(SynthTest, ClassCountsBalancedWithinOne) {
  for (size_t n : {100u, 101u, 137u}) {
    auto spec = PurchaseLike(1);
    spec.num_points = n;
    const auto ds = Synthesize(spec);
    std::vector<size_t> counts(spec.num_classes, 0);
    for (int y : ds.labels()) ++counts[y];
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    EXPECT_LE(*hi - *lo, 1u) << n;
  }
}

TEST(SynthTest, ZeroNoiseLabelsAreComponentIds) {
  const auto spec = PurchaseLike(9);
  EXPECT_EQ(Synthesize(spec).labels(), SynthesizeComponentIds(spec));
}

TEST(SynthTest, LabelNoiseChangesOnlyTheRequestedFraction) {
  auto spec = PurchaseLike(9);
  spec.label_noise = 0.2;
  const auto labels = Synthesize(spec).labels();
  const auto components = SynthesizeComponentIds(spec);
  size_t changed = 0;
  for (size_t i = 0; i < labels.size(); ++i) changed += labels[i] != components[i];
  EXPECT_NEAR(static_cast<double>(changed) / labels.size(), 0.2, 0.06);
}

TEST(SynthTest, TwoGaussiansAreLinearlySeparable) {
  const auto ds = Synthesize(TwoBlobs(5));
  auto probe = nn::Mlp<double>::Initialize({{2, 2, nn::Activation::kSoftmax}}, 1, 0.1);
  nn::TrainOptions options;
  options.epochs = 200;
  options.batch_size = 10;
  options.optimizer.learning_rate = 0.05;
  nn::Fit(probe, ds.features(), nullptr, ds.labels(), options);
  const auto out = nn::Predict(probe, ds.features());
  size_t hits = 0;
  for (size_t i = 0; i < ds.size(); ++i) hits += static_cast<int>(nn::ArgMax(out.row(i))) == ds.labels()[i];
  EXPECT_GT(static_cast<double>(hits) / ds.size(), 0.95);
}

TEST(SynthTest, SensitiveValuesBalanced) {
  auto spec = PurchaseLike(2);
  spec.num_classes = 2;
  spec.family_size = 1;
  spec.num_sensitive = 5;
  spec.sensitive_strength = 0.8;
  const auto ds = Synthesize(spec);
  ASSERT_TRUE(ds.has_sensitive());
  EXPECT_EQ(ds.num_sensitive(), 5u);
  std::vector<size_t> counts(5, 0);
  for (int s : ds.sensitive()) ++counts[s];
  for (size_t c : counts) EXPECT_EQ(c, 120u);
}

TEST(SynthTest, DegenerateSpecsRejected) {
  auto spec = TwoBlobs(0);
  spec.num_classes = 1;
  EXPECT_THROW(Synthesize(spec), Error);
  spec = TwoBlobs(0);
  spec.feature_dim = 1;
  EXPECT_THROW(Synthesize(spec), Error);
  spec = TwoBlobs(0);
  spec.label_noise = 1.0;
  EXPECT_THROW(Synthesize(spec), Error);
  spec = TwoBlobs(0);
  spec.num_points = 1;
  EXPECT_THROW(Synthesize(spec), Error);
}

// Empirical mean of column j over rows selected by keep(i).
template <typename Keep>
double ColumnMean(const Dataset& ds, size_t j, Keep keep) {
  double total = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (!keep(i)) continue;
    total += ds.features()(i, j);
    ++n;
  }
  return total / static_cast<double>(n);
}

TEST(SynthTest, GaussianClassMeansSitOnAxes) {
  SynthSpec spec;
  spec.num_points = 4000;
  spec.num_classes = 4;
  spec.feature_dim = 6;
  spec.separation = 2.0;
  spec.stddev = 0.5;
  spec.seed = 8;
  const auto ds = Synthesize(spec);
  // 1000 rows per class: the mean's standard error is 0.5 / sqrt(1000).
  for (int c = 0; c < 4; ++c) {
    for (size_t j = 0; j < 6; ++j) {
      const double expected = j == static_cast<size_t>(c) ? 2.0 : 0.0;
      EXPECT_NEAR(ColumnMean(ds, j, [&](size_t i) { return ds.labels()[i] == c; }), expected, 0.07)
          << "class " << c << " column " << j;
    }
  }
}

TEST(SynthTest, SiblingsShareTheFamilyAxis) {
  SynthSpec spec;
  spec.num_points = 4000;
  spec.num_classes = 4;
  spec.feature_dim = 8;
  spec.family_size = 2;
  spec.separation = 2.0;
  spec.sibling_separation = 0.5;
  spec.stddev = 0.3;
  spec.seed = 8;
  const auto ds = Synthesize(spec);
  // Two families; class c sits at 2 e_(c / 2) + 0.5 e_(2 + c).
  for (int c = 0; c < 4; ++c) {
    const auto in_class = [&](size_t i) { return ds.labels()[i] == c; };
    for (size_t j = 0; j < 8; ++j) {
      double expected = 0.0;
      if (j == static_cast<size_t>(c / 2)) expected += 2.0;
      if (j == static_cast<size_t>(2 + c)) expected += 0.5;
      EXPECT_NEAR(ColumnMean(ds, j, in_class), expected, 0.05) << "class " << c << " column " << j;
    }
  }
}

TEST(SynthTest, SensitiveValueScalesExpression) {
  SynthSpec spec;
  spec.num_points = 5000;
  spec.num_classes = 2;
  spec.feature_dim = 2;
  spec.separation = 2.0;
  spec.stddev = 0.2;
  spec.num_sensitive = 5;
  spec.sensitive_strength = 0.8;
  spec.seed = 4;
  const auto ds = Synthesize(spec);
  for (int s = 0; s < 5; ++s) {
    const double expected = 2.0 * (1.0 - 0.8 * s / 4.0);
    const double got =
        ColumnMean(ds, 0, [&](size_t i) { return ds.labels()[i] == 0 && ds.sensitive()[i] == s; });
    EXPECT_NEAR(got, expected, 0.05) << "sensitive value " << s;
  }
}

TEST(SynthTest, UninformativeBernoulliColumnsIgnoreTheClass) {
  auto spec = PurchaseLike(6);
  spec.num_points = 8000;
  spec.num_classes = 4;
  spec.feature_dim = 10;
  spec.family_size = 1;
  spec.informative_fraction = 0.5;
  spec.high_prob = 0.9;
  spec.low_prob = 0.1;
  const auto ds = Synthesize(spec);
  // 2000 rows per class; a Bernoulli(0.5) mean has standard error about 0.011.
  for (int c = 0; c < 4; ++c) {
    const auto in_class = [&](size_t i) { return ds.labels()[i] == c; };
    for (size_t j = 5; j < 10; ++j) EXPECT_NEAR(ColumnMean(ds, j, in_class), 0.5, 0.045);
    for (size_t j = 0; j < 5; ++j) {
      const double m = ColumnMean(ds, j, in_class);
      EXPECT_TRUE(std::abs(m - 0.9) < 0.045 || std::abs(m - 0.1) < 0.045) << m;
    }
  }
}

SplitPlan DeskPlan(uint64_t seed) { return {200, 200, 200, 100, 100, seed}; }

TEST(SplitTest, PartitionIsDisjointAndNested) {
  const auto split = Split(700, DeskPlan(4));
  std::set<size_t> seen;
  for (const auto* part : {&split.d1, &split.d2, &split.d3}) {
    for (size_t i : *part) {
      EXPECT_LT(i, 700u);
      EXPECT_TRUE(seen.insert(i).second) << "index " << i << " appears twice";
    }
  }
  EXPECT_EQ(seen.size(), 600u);
  const std::set<size_t> d1(split.d1.begin(), split.d1.end());
  const std::set<size_t> d3(split.d3.begin(), split.d3.end());
  for (size_t i : split.attacker_members) EXPECT_TRUE(d1.count(i));
  for (size_t i : split.attacker_nonmembers) EXPECT_TRUE(d3.count(i));
  EXPECT_EQ(split.attacker_members.size(), 100u);
  EXPECT_EQ(split.held_out_members().size(), 100u);
  EXPECT_EQ(split.held_out_nonmembers().size(), 100u);
}

TEST(SplitTest, SameSeedSameAssignment) {
  EXPECT_EQ(Split(700, DeskPlan(4)), Split(700, DeskPlan(4)));
  EXPECT_FALSE(Split(700, DeskPlan(4)) == Split(700, DeskPlan(5)));
}

TEST(SplitTest, FullAttackerSubsetEqualsD1) {
  auto plan = DeskPlan(1);
  plan.attacker_members = plan.d1;
  const auto split = Split(600, plan);
  EXPECT_EQ(split.attacker_members, split.d1);
  EXPECT_TRUE(split.held_out_members().empty());
}

TEST(SplitTest, PurchaseAllocation) {
  const SplitPlan plan{20000, 20000, 20000, 10000, 10000, 7};
  const auto split = Split(197324, plan);
  EXPECT_EQ(split.d1.size(), 20000u);
  EXPECT_EQ(split.d2.size(), 20000u);
  EXPECT_EQ(split.d3.size(), 20000u);
  EXPECT_EQ(split.attacker_members.size(), 10000u);
  EXPECT_EQ(split.attacker_nonmembers.size(), 10000u);
}

TEST(SplitTest, InsufficientDataRejected) {
  EXPECT_THROW(Split(599, DeskPlan(0)), Error);
  auto plan = DeskPlan(0);
  plan.attacker_members = 201;
  EXPECT_THROW(Split(1000, plan), Error);
}

TEST(SplitTest, ManifestRoundTrip) {
  const auto split = Split(700, DeskPlan(8));
  EXPECT_EQ(ParseSplitManifest(SplitManifestJson(split)), split);
  EXPECT_THROW(ParseSplitManifest("{not json"), Error);
}

TEST(SplitTest, BalancedMembershipLabelsMatchSplit) {
  const auto split = Split(700, DeskPlan(8));
  const auto set = BalancedMembership(split.held_out_members(), split.held_out_nonmembers());
  const std::set<size_t> d1(split.d1.begin(), split.d1.end());
  size_t members = 0;
  for (size_t i = 0; i < set.rows.size(); ++i) {
    EXPECT_EQ(set.is_member[i] == 1, d1.count(set.rows[i]) == 1);
    members += set.is_member[i];
  }
  EXPECT_EQ(2 * members, set.rows.size());
}

TEST(CsvTest, ParsesRows) {
  const auto ds = ParseCsv("a,b,label\n0.5,1,0\n-2,3e-1,1\n4,5,1\n", {});
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.feature_dim(), 2u);
  EXPECT_DOUBLE_EQ(ds.features()(1, 1), 0.3);
  EXPECT_EQ(ds.labels(), (std::vector<int>{0, 1, 1}));
}

TEST(CsvTest, MissingLabelNamesTheLine) {
  try {
    ParseCsv("a,b,label\n0,1,0\n2,3,\n", {});
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(CsvTest, RejectsBadCells) {
  EXPECT_THROW(ParseCsv("a,b,label\n0,x,1\n", {}), Error);
  EXPECT_THROW(ParseCsv("a,b,label\n0,1\n", {}), Error);
  EXPECT_THROW(ParseCsv("a,b,y\n0,1,1\n", {}), Error);
}

TEST(CsvTest, RoundTrip) {
  auto spec = PurchaseLike(6);
  spec.num_points = 50;
  spec.num_sensitive = 5;
  const auto ds = Synthesize(spec);
  CsvSchema schema;
  schema.sensitive_column = "sensitive";
  schema.num_classes = ds.num_classes();
  schema.num_sensitive = ds.num_sensitive();
  const auto path = std::filesystem::temp_directory_path() / "purifier_csv_roundtrip.csv";
  SaveCsv(path, ds);
  auto loaded = LoadCsv(path, schema);
  EXPECT_EQ(loaded.features(), ds.features());
  EXPECT_EQ(loaded.labels(), ds.labels());
  EXPECT_EQ(loaded.sensitive(), ds.sensitive());
  std::filesystem::remove(path);
  EXPECT_THROW(LoadCsv(path, schema), Error);
}

}  // namespace
}  // namespace purifier::data
