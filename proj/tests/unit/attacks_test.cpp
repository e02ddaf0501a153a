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
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "purifier/attacks/attacks.hpp"
#include "purifier/attacks/metrics.hpp"
#include "purifier/attacks/oracle.hpp"
#include "purifier/classifier/target.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/random.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/data/split.hpp"
#include "purifier/data/synth.hpp"

namespace purifier::attacks {
namespace {

// Only a row-to-confidence function; nothing here exposes model parameters.
class MockOracle : public QueryInterface {
 public:
  using RowFn = std::function<std::vector<double>(std::span<const double>)>;
  MockOracle(size_t k, RowFn fn) : k_(k), fn_(std::move(fn)) {}
  nn::MatrixD Query(const nn::MatrixD& inputs) const override {
    ++calls_;
    nn::MatrixD out(inputs.rows(), k_);
    for (size_t r = 0; r < inputs.rows(); ++r) {
      const auto p = fn_(inputs.row(r));
      std::copy(p.begin(), p.end(), out.row(r).begin());
    }
    return out;
  }
  size_t num_classes() const override { return k_; }
  size_t calls() const { return calls_; }

 private:
  size_t k_;
  RowFn fn_;
  mutable size_t calls_ = 0;
};

std::vector<double> Softmax(std::vector<double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (double& v : logits) s += (v = std::exp(v - m));
  for (double& v : logits) v /= s;
  return logits;
}

// Pseudo-random simplex point keyed by the row contents.
std::vector<double> HashedConfidence(std::span<const double> row, size_t k, double scale) {
  Rng rng(HashValues(row, 99));
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> logits(k);
  for (double& v : logits) v = normal(rng);
  return Softmax(logits);
}

// Column 0 carries the row id so lookup oracles can key on it. Members and
// non-members interleave, so the id itself says nothing about membership.
struct Fixture {
  data::Dataset pool;
  AttackContext ctx;
  std::vector<int> is_member;
};

Fixture MakeFixture(size_t members, size_t nonmembers, size_t aux, size_t k, size_t d, uint64_t seed,
                    size_t num_sensitive = 0) {
  const size_t n = members + nonmembers;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, static_cast<int>(k) - 1);
  nn::MatrixD x(n, d);
  std::vector<int> y(n), s;
  for (size_t i = 0; i < n; ++i) {
    x(i, 0) = static_cast<double>(i);
    for (size_t j = 1; j < d; ++j) x(i, j) = normal(rng);
    y[i] = label(rng);
  }
  if (num_sensitive > 0) {
    std::uniform_int_distribution<int> sens(0, static_cast<int>(num_sensitive) - 1);
    for (size_t i = 0; i < n; ++i) s.push_back(sens(rng));
  }
  Fixture f{data::Dataset("mock", std::move(x), std::move(y), std::move(s), k, num_sensitive), {}, {}};
  size_t m = 0, o = 0;
  for (size_t i = 0; i < n; ++i) {
    const bool member = o == nonmembers || (m < members && i % 2 == 0);
    f.is_member.push_back(member ? 1 : 0);
    if (member) {
      (m++ < aux ? f.ctx.aux_members : f.ctx.eval_members).push_back(i);
    } else {
      (o++ < aux ? f.ctx.aux_nonmembers : f.ctx.eval_nonmembers).push_back(i);
    }
  }
  f.ctx.seed = seed;
  f.ctx.settings.shadow.hidden_sizes = {16};
  f.ctx.settings.shadow.epochs = 5;
  f.ctx.settings.epochs = 20;
  return f;
}

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

TEST(Metrics, AucExamples) {
  const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> member{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(Auc(scores, member), 0.75);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}), 1.0);
}

TEST(Metrics, ThresholdAccuracyAndBestThreshold) {
  const std::vector<double> scores{0.1, 0.2, 0.7, 0.9};
  const std::vector<int> member{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(ThresholdAccuracy(scores, member, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(ThresholdAccuracy(scores, member, 0.0), 0.5);
  const double t = BestThreshold(scores, member);
  EXPECT_DOUBLE_EQ(t, 0.45);
  EXPECT_DOUBLE_EQ(ThresholdAccuracy(scores, member, t), 1.0);
}

TEST(Metrics, RandomScoreAucIsHalf) {
  double total = 0.0;
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> scores(5000);
    std::vector<int> member(5000);
    for (size_t i = 0; i < scores.size(); ++i) {
      scores[i] = u(rng);
      member[i] = i % 2;
    }
    const double auc = Auc(scores, member);
    EXPECT_NEAR(auc, 0.5, 0.03) << "seed " << seed;
    total += auc;
  }
  EXPECT_NEAR(total / 30.0, 0.5, 0.01);
}

TEST(Mmd, SelfDistanceIsZero) {
  nn::MatrixD a(5, 3);
  for (size_t i = 0; i < a.values().size(); ++i) a.values()[i] = std::sin(static_cast<double>(i));
  EXPECT_NEAR(Mmd(a, a, 1.0), 0.0, 1e-15);
  nn::MatrixD b = a;
  for (double& v : b.values()) v += 3.0;
  EXPECT_GT(Mmd(a, b, 1.0), 0.1);
}

TEST(Mmd, CoincidentPointsHaveNoBandwidth) {
  nn::MatrixD same(4, 2, 0.25);
  EXPECT_EQ(CodeOf([&] { MedianPairwiseDistance(same); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { Mmd(same, same, 0.0); }), ErrorCode::kInvalidArgument);
}

TEST(Mmd, MedianPairwiseDistanceExample) {
  nn::MatrixD p(3, 1);
  p(0, 0) = 0.0;
  p(1, 0) = 1.0;
  p(2, 0) = 3.0;
  EXPECT_DOUBLE_EQ(MedianPairwiseDistance(p), 2.0);  // distances 1, 2, 3
}

TEST(Gap, IdentityHoldsExactly) {
  auto f = MakeFixture(600, 600, 100, 4, 3, 5);
  // Members always correct; non-members correct on every third row.
  const auto& labels = f.pool.labels();
  MockOracle oracle(4, [&](std::span<const double> row) {
    const size_t id = static_cast<size_t>(row[0]);
    const bool correct = f.is_member[id] == 1 || id % 3 == 0;
    std::vector<double> p(4, 0.1);
    p[static_cast<size_t>(correct ? labels[id] : (labels[id] + 1) % 4)] = 0.7;
    return p;
  });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto r = GapAttack(f.ctx);
  double correct_non = 0.0;
  for (size_t id : f.ctx.eval_nonmembers) correct_non += id % 3 == 0;
  const double acc_test = correct_non / static_cast<double>(f.ctx.eval_nonmembers.size());
  EXPECT_NEAR(r.accuracy, (1.0 + 1.0 - acc_test) / 2.0, 1e-12);
  EXPECT_EQ(r.attack, "gap");
  EXPECT_EQ(r.is_member.size(), 1000u);
}

TEST(Gap, ReproducesPublishedPair) {
  // 10000 evaluated non-members, 8436 of them classified correctly.
  auto f = MakeFixture(10001, 10001, 1, 3, 2, 7);
  const auto& labels = f.pool.labels();
  std::vector<int> correct_flag(f.pool.size(), 1);
  for (size_t i = 8436; i < f.ctx.eval_nonmembers.size(); ++i) correct_flag[f.ctx.eval_nonmembers[i]] = 0;
  MockOracle oracle(3, [&](std::span<const double> row) {
    const size_t id = static_cast<size_t>(row[0]);
    const bool correct = correct_flag[id] == 1;
    std::vector<double> p(3, 0.0);
    p[static_cast<size_t>(correct ? labels[id] : (labels[id] + 1) % 3)] = 1.0;
    return p;
  });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_NEAR(GapAttack(f.ctx).accuracy, 0.5782, 1e-12);
}

TEST(Gap, BalancedEvaluationTruncatesLargerSide) {
  auto f = MakeFixture(300, 500, 50, 3, 2, 9);
  MockOracle oracle(3, [](std::span<const double> row) { return HashedConfidence(row, 3, 1.0); });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto r = GapAttack(f.ctx);
  EXPECT_EQ(std::count(r.is_member.begin(), r.is_member.end(), 1), 250);
  EXPECT_EQ(std::count(r.is_member.begin(), r.is_member.end(), 0), 250);
}

TEST(Nsh, NoSignalOracleIsChance) {
  auto f = MakeFixture(3000, 3000, 1000, 5, 4, 11);
  MockOracle oracle(5, [](std::span<const double> row) { return HashedConfidence(row, 5, 2.0); });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto r = NshAttack(f.ctx);
  EXPECT_NEAR(r.accuracy, 0.5, 0.03);
  EXPECT_NEAR(r.auc, 0.5, 0.03);
  EXPECT_GT(oracle.calls(), 0u);
  for (double s : r.scores) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Nsh, ConstantOracleIsChance) {
  auto f = MakeFixture(1500, 1500, 500, 5, 4, 12);
  MockOracle oracle(5, [](std::span<const double>) { return std::vector<double>{0.6, 0.1, 0.1, 0.1, 0.1}; });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_NEAR(NshAttack(f.ctx).accuracy, 0.5, 0.03);
}

TEST(Nsh, LeakyOracleIsDetected) {
  auto f = MakeFixture(1500, 1500, 500, 5, 4, 13);
  const auto& labels = f.pool.labels();
  MockOracle oracle(5, [&](std::span<const double> row) {
    const size_t id = static_cast<size_t>(row[0]);
    std::vector<double> p(5, 0.2);
    if (f.is_member[id] == 1) {
      p.assign(5, 0.025);
      p[static_cast<size_t>(labels[id])] = 0.9;
    }
    return p;
  });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_GT(NshAttack(f.ctx).accuracy, 0.95);
}

TEST(Nsh, SingleClassAuxIsRejected) {
  auto f = MakeFixture(100, 100, 20, 3, 2, 14);
  f.ctx.aux_nonmembers.clear();
  MockOracle oracle(3, [](std::span<const double> row) { return HashedConfidence(row, 3, 1.0); });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_EQ(CodeOf([&] { NshAttack(f.ctx); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { TransferAttack(f.ctx); }), ErrorCode::kInvalidArgument);
}

TEST(Mlleaks, ConstantOracleIsChance) {
  auto f = MakeFixture(1500, 1500, 500, 5, 6, 15);
  MockOracle oracle(5, [](std::span<const double>) { return std::vector<double>{0.6, 0.1, 0.1, 0.1, 0.1}; });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto shadow = TrainShadow(f.ctx);
  EXPECT_EQ(shadow.in_rows.size() + shadow.out_rows.size(), 1000u);
  EXPECT_NEAR(MlleaksAttack(f.ctx, &shadow).accuracy, 0.5, 0.03);
}

TEST(Adaptive, EmptyRecipeIsChanceOnConstantOracle) {
  auto f = MakeFixture(1000, 1000, 400, 4, 6, 16);
  MockOracle oracle(4, [](std::span<const double>) { return std::vector<double>{0.7, 0.1, 0.1, 0.1}; });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_NEAR(AdaptiveAttack(f.ctx, DefenseRecipe{}).accuracy, 0.5, 0.03);
}

TEST(Adaptive, MatchesNonAdaptiveOnUndefendedTarget) {
  data::SynthSpec spec;
  spec.num_points = 2400;
  spec.num_classes = 5;
  spec.feature_dim = 16;
  spec.separation = 1.0;
  spec.stddev = 1.0;
  spec.seed = 3;
  const auto pool = data::Synthesize(spec);
  const auto split = data::Split(pool.size(), {600, 600, 600, 300, 300, 3});
  classifier::ClassifierConfig cfg;
  cfg.hidden_sizes = {128};
  cfg.epochs = 80;
  cfg.init_stddev = 0.1;
  cfg.optimizer.learning_rate = 0.003;
  cfg.seed = 3;
  const auto target =
      classifier::TrainTarget(cfg, pool.Subset(split.d1, "d1"), pool.Subset(split.d3, "d3")).model.Cast<double>();
  const TargetOracle oracle(target);
  AttackContext ctx;
  ctx.oracle = &oracle;
  ctx.pool = &pool;
  ctx.aux_members = split.attacker_members;
  ctx.aux_nonmembers = split.attacker_nonmembers;
  ctx.eval_members = split.held_out_members();
  ctx.eval_nonmembers = split.held_out_nonmembers();
  ctx.seed = 3;
  ctx.settings.shadow = cfg;
  // Both classify (confidence, ground truth); NSH learns from the target's
  // real membership, the adaptive attack from its shadow's.
  const double nsh = NshAttack(ctx).accuracy;
  const double adaptive = AdaptiveAttack(ctx, DefenseRecipe{}).accuracy;
  EXPECT_NEAR(nsh, adaptive, 0.05);
  EXPECT_GT(GapAttack(ctx).accuracy, 0.55);
}

TEST(BlindMi, CandidateIdenticalToProbeIsNonmember) {
  const nn::MatrixD targets = [] {
    nn::MatrixD m(6, 4);
    for (size_t i = 0; i < m.values().size(); ++i) m.values()[i] = std::cos(0.7 * static_cast<double>(i));
    return m;
  }();
  const auto scores = DifferentialMmdScores(targets, targets);
  for (double s : scores) EXPECT_LT(s, 0.0);
}

TEST(BlindMi, IdentityTransformClassifiesEveryoneNonmember) {
  auto f = MakeFixture(200, 200, 50, 4, 4, 17);
  MockOracle oracle(4, [](std::span<const double> row) { return HashedConfidence(row, 4, 1.5); });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto r = BlindMiAttack(f.ctx, [](const nn::MatrixD& x, Rng&) { return x; });
  for (double s : r.scores) EXPECT_LT(s, 0.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
}

TEST(BlindMi, FeaturesAreTopThreePlusTruth) {
  nn::MatrixD c(1, 4);
  c(0, 0) = 0.1;
  c(0, 1) = 0.5;
  c(0, 2) = 0.15;
  c(0, 3) = 0.25;
  const auto feat = BlindMiFeatures(c, std::vector<int>{2});
  ASSERT_EQ(feat.cols(), 4u);
  EXPECT_DOUBLE_EQ(feat(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(feat(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(feat(0, 2), 0.15);
  EXPECT_DOUBLE_EQ(feat(0, 3), 0.15);
}

TEST(BlindMi, MeanReplacementReplacesRequestedFraction) {
  const auto transform = MeanReplacementTransform({9.0, 9.0, 9.0, 9.0}, 0.5);
  nn::MatrixD x(3, 4, 1.0);
  Rng rng(1);
  const auto out = transform(x, rng);
  for (size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(std::count(out.row(r).begin(), out.row(r).end(), 9.0), 2);
  }
}

TEST(Transfer, NoSignalOracleAucIsHalf) {
  auto f = MakeFixture(3000, 3000, 1000, 4, 4, 18);
  MockOracle oracle(4, [](std::span<const double> row) { return HashedConfidence(row, 4, 2.0); });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto r = TransferAttack(f.ctx);
  EXPECT_EQ(r.attack, "transfer");
  EXPECT_NEAR(r.auc, 0.5, 0.03);
}

TEST(Inversion, ConstantOracleGivesInputVariance) {
  const size_t n = 1000, d = 4;
  nn::MatrixD x(n, d);
  Rng rng(19);
  std::normal_distribution<double> normal(0.5, 1.0);
  for (double& v : x.values()) v = normal(rng);
  const data::Dataset pool("const", x, std::vector<int>(n, 0), {}, 3);
  MockOracle oracle(3, [](std::span<const double>) { return std::vector<double>{0.5, 0.3, 0.2}; });
  AttackContext ctx;
  ctx.oracle = &oracle;
  ctx.pool = &pool;
  ctx.seed = 19;
  std::vector<size_t> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = i;
  const auto result = InversionAttack(ctx, rows);
  EXPECT_EQ(result.train_rows, 800u);
  EXPECT_EQ(result.test_rows, 200u);
  // Best constant predictor: per-feature variance around the mean.
  double var = 0.0;
  for (size_t c = 0; c < d; ++c) {
    double mean = 0.0, sq = 0.0;
    for (size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    for (size_t r = 0; r < n; ++r) sq += (x(r, c) - mean) * (x(r, c) - mean);
    var += sq / static_cast<double>(n);
  }
  var /= static_cast<double>(d);
  EXPECT_NEAR(result.error, var, 0.1 * var);
}

TEST(Inversion, BijectiveToyIsNearlyExact) {
  // Two classes, one feature: p = softmax([x, 0]) determines x exactly.
  const size_t n = 1000;
  nn::MatrixD x(n, 1);
  std::vector<int> y(n);
  Rng rng(20);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (size_t i = 0; i < n; ++i) {
    x(i, 0) = u(rng);
    y[i] = x(i, 0) > 0 ? 0 : 1;
  }
  const data::Dataset pool("toy", std::move(x), std::move(y), {}, 2);
  MockOracle oracle(2, [](std::span<const double> row) { return Softmax({row[0], 0.0}); });
  AttackContext ctx;
  ctx.oracle = &oracle;
  ctx.pool = &pool;
  ctx.seed = 20;
  ctx.settings.inversion_epochs = 200;
  ctx.settings.learning_rate = 0.01;
  std::vector<size_t> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = i;
  const auto result = InversionAttack(ctx, rows);
  // Input variance is 4/3; the noise floor is zero.
  EXPECT_LT(result.error, 0.01);
}

TEST(Attribute, IndependentSensitiveIsChance) {
  auto f = MakeFixture(3000, 3000, 1000, 5, 6, 21, 5);
  MockOracle oracle(5, [](std::span<const double> row) {
    return Softmax({row[1], row[2], row[3], -row[1], row[4] + row[5]});
  });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  const auto r = AttributeAttack(f.ctx);
  EXPECT_EQ(r.num_sensitive, 5u);
  EXPECT_NEAR(r.accuracy, 0.2, 0.03);
}

TEST(Attribute, LeakyOracleIsDetected) {
  auto f = MakeFixture(1000, 1000, 500, 5, 3, 22, 5);
  const auto& sensitive = f.pool.sensitive();
  MockOracle oracle(5, [&](std::span<const double> row) {
    std::vector<double> p(5, 0.1);
    p[static_cast<size_t>(sensitive[static_cast<size_t>(row[0])])] = 0.6;
    return p;
  });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_GT(AttributeAttack(f.ctx).accuracy, 0.95);
}

TEST(Attribute, MissingSensitiveLabelsAreRejected) {
  auto f = MakeFixture(100, 100, 20, 3, 2, 23);
  MockOracle oracle(3, [](std::span<const double> row) { return HashedConfidence(row, 3, 1.0); });
  f.ctx.oracle = &oracle;
  f.ctx.pool = &f.pool;
  EXPECT_EQ(CodeOf([&] { AttributeAttack(f.ctx); }), ErrorCode::kInvalidArgument);
}

TEST(Records, ResultJsonKeys) {
  MembershipAttackResult r;
  r.attack = "nsh";
  r.target_arm = "full";
  r.accuracy = 0.51;
  r.auc = 0.5;
  r.seed = 4;
  const auto j = nlohmann::json::parse(AttackResultJson(r));
  for (const char* key : {"attack", "target_arm", "accuracy", "auc", "threshold", "seed", "wall_clock"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto stub = nlohmann::json::parse(BoundaryAttackStubJson("none", 4));
  EXPECT_EQ(stub.at("status"), "not implemented");
}

TEST(Oracle, ArmNamesRoundTrip) {
  for (Arm arm : {Arm::kNone, Arm::kReformer, Arm::kFull}) EXPECT_EQ(ParseArm(ArmName(arm)), arm);
  EXPECT_EQ(CodeOf([] { ParseArm("both"); }), ErrorCode::kConfig);
  EXPECT_FALSE(ArmFlags(Arm::kReformer).swapper_enabled);
  EXPECT_TRUE(ArmFlags(Arm::kFull).swapper_enabled);
}

}  // namespace
}  // namespace purifier::attacks
