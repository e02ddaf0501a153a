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
#include "purifier/attacks/attacks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "purifier/attacks/metrics.hpp"
#include "purifier/common/error.hpp"
#include "purifier/nn/loss.hpp"
#include "purifier/nn/train.hpp"

namespace purifier::attacks {
namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

void CheckContext(const AttackContext& ctx) {
  Require(ctx.oracle != nullptr && ctx.pool != nullptr, ErrorCode::kInvalidArgument, "attack context is incomplete");
  Require(!ctx.eval_members.empty() && !ctx.eval_nonmembers.empty(), ErrorCode::kInvalidArgument,
          "evaluation needs members and non-members");
}

void CheckAux(const AttackContext& ctx) {
  Require(!ctx.aux_members.empty() && !ctx.aux_nonmembers.empty(), ErrorCode::kInvalidArgument,
          "auxiliary data must contain members and non-members");
}

std::vector<int> LabelsOf(const data::Dataset& pool, const std::vector<size_t>& rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = pool.labels()[rows[i]];
  return out;
}

nn::MatrixD Query(const AttackContext& ctx, const std::vector<size_t>& rows) {
  return ctx.oracle->Query(nn::SelectRows(ctx.pool->features(), rows));
}

std::vector<size_t> Concat(const std::vector<size_t>& a, const std::vector<size_t>& b) {
  std::vector<size_t> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

nn::MatrixD StackRows(const nn::MatrixD& a, const nn::MatrixD& b) {
  Require(a.cols() == b.cols() || a.rows() == 0 || b.rows() == 0, ErrorCode::kDimensionMismatch, "stack mismatch");
  const size_t cols = a.rows() == 0 ? b.cols() : a.cols();
  nn::MatrixD out(a.rows() + b.rows(), cols);
  std::copy(a.values().begin(), a.values().end(), out.values().begin());
  std::copy(b.values().begin(), b.values().end(),
            out.values().begin() + static_cast<std::ptrdiff_t>(a.values().size()));
  return out;
}

// Confidence followed by onehot(ground truth).
nn::MatrixD WithGroundTruth(const nn::MatrixD& conf, std::span<const int> labels) {
  nn::MatrixD onehot(conf.rows(), conf.cols());
  for (size_t r = 0; r < conf.rows(); ++r) onehot(r, static_cast<size_t>(labels[r])) = 1.0;
  return nn::ConcatCols(conf, onehot);
}

nn::MatrixD SortedTop(const nn::MatrixD& conf, size_t top_k) {
  const size_t keep = top_k == 0 ? conf.cols() : std::min(top_k, conf.cols());
  nn::MatrixD out(conf.rows(), keep);
  std::vector<double> row;
  for (size_t r = 0; r < conf.rows(); ++r) {
    row.assign(conf.row(r).begin(), conf.row(r).end());
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(), std::greater<>());
    std::copy(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), out.row(r).begin());
  }
  return out;
}

nn::MatrixD LogFeatures(const nn::MatrixD& conf) {
  nn::MatrixD out = conf;
  for (double& v : out.values()) v = std::log(std::max(v, std::numeric_limits<double>::min()));
  return out;
}

// A one-hidden-layer network with z-scored inputs.
struct AttackModel {
  nn::Mlp<double> net;
  std::vector<double> mean;
  std::vector<double> scale;

  nn::MatrixD Standardize(const nn::MatrixD& x) const {
    nn::MatrixD out = x;
    for (size_t r = 0; r < out.rows(); ++r) {
      auto row = out.row(r);
      for (size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - mean[c]) / scale[c];
    }
    return out;
  }
  nn::MatrixD Predict(const nn::MatrixD& x) const { return nn::Predict(net, Standardize(x)); }
};

AttackModel TrainAttackModel(const AttackSettings& s, const nn::MatrixD& x, const nn::MatrixD* targets,
                             std::span<const int> labels, size_t outputs, nn::Activation head, size_t epochs,
                             uint64_t seed) {
  Require(x.rows() > 0, ErrorCode::kInvalidArgument, "attack model has no training rows");
  AttackModel model;
  model.mean.assign(x.cols(), 0.0);
  model.scale.assign(x.cols(), 0.0);
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t c = 0; c < x.cols(); ++c) model.mean[c] += x(r, c);
  }
  for (double& m : model.mean) m /= static_cast<double>(x.rows());
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t c = 0; c < x.cols(); ++c) model.scale[c] += (x(r, c) - model.mean[c]) * (x(r, c) - model.mean[c]);
  }
  for (double& v : model.scale) {
    v = std::sqrt(v / static_cast<double>(x.rows()));
    if (!(v > 1e-12)) v = 1.0;
  }

  const std::vector<size_t> sizes{x.cols(), s.hidden_units, outputs};
  auto net = nn::Mlp<float>::Initialize(nn::ChainSpecs(sizes, nn::Activation::kRelu, head),
                                        DeriveSeed(seed, "attack-init"), s.init_stddev);
  nn::TrainOptions options;
  options.epochs = epochs;
  options.batch_size = s.batch_size;
  options.optimizer.learning_rate = s.learning_rate;
  options.seed = DeriveSeed(seed, "attack-fit");
  options.loss = targets != nullptr ? nn::LossKind::kMse : nn::LossKind::kCrossEntropy;
  const auto values = targets != nullptr ? std::optional<nn::MatrixF>(targets->Cast<float>()) : std::nullopt;
  nn::Fit(net, model.Standardize(x).Cast<float>(), values ? &*values : nullptr, labels, options);
  model.net = net.Cast<double>();
  return model;
}

AttackModel TrainBinaryAttack(const AttackSettings& s, const nn::MatrixD& in, const nn::MatrixD& out,
                              uint64_t seed) {
  const auto x = StackRows(in, out);
  std::vector<int> labels(x.rows(), 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(in.rows()), 1);
  return TrainAttackModel(s, x, nullptr, labels, 1, nn::Activation::kSigmoid, s.epochs, seed);
}

// Balanced evaluation over the held-out rows.
struct EvalSet {
  std::vector<size_t> rows;
  std::vector<int> is_member;
};

EvalSet MakeEvalSet(const AttackContext& ctx) {
  const size_t n = std::min(ctx.eval_members.size(), ctx.eval_nonmembers.size());
  EvalSet set;
  set.rows.assign(ctx.eval_members.begin(), ctx.eval_members.begin() + static_cast<std::ptrdiff_t>(n));
  set.rows.insert(set.rows.end(), ctx.eval_nonmembers.begin(), ctx.eval_nonmembers.begin() + static_cast<std::ptrdiff_t>(n));
  set.is_member.assign(2 * n, 0);
  std::fill(set.is_member.begin(), set.is_member.begin() + static_cast<std::ptrdiff_t>(n), 1);
  return set;
}

MembershipAttackResult Finish(std::string name, const AttackContext& ctx, const EvalSet& eval,
                              std::vector<double> scores, double threshold, Clock::time_point start) {
  MembershipAttackResult r;
  r.attack = std::move(name);
  r.target_arm = ctx.target_arm;
  r.is_member = eval.is_member;
  r.threshold = threshold;
  r.accuracy = ThresholdAccuracy(scores, r.is_member, threshold);
  r.auc = Auc(scores, r.is_member);
  r.scores = std::move(scores);
  r.seed = ctx.seed;
  r.wall_clock = Since(start);
  return r;
}

std::vector<double> Column(const nn::MatrixD& m, size_t col) {
  std::vector<double> out(m.rows());
  for (size_t r = 0; r < m.rows(); ++r) out[r] = m(r, col);
  return out;
}

}  // namespace

NonmemberTransform MeanReplacementTransform(std::vector<double> population_mean, double fraction) {
  Require(fraction >= 0.0 && fraction <= 1.0, ErrorCode::kInvalidArgument, "replacement fraction must lie in [0, 1]");
  return [mean = std::move(population_mean), fraction](const nn::MatrixD& inputs, Rng& rng) {
    Require(inputs.cols() == mean.size(), ErrorCode::kDimensionMismatch, "population mean width mismatch");
    nn::MatrixD out = inputs;
    const size_t replace = static_cast<size_t>(std::llround(fraction * static_cast<double>(inputs.cols())));
    for (size_t r = 0; r < out.rows(); ++r) {
      auto cols = Permutation(inputs.cols(), rng);
      for (size_t i = 0; i < replace; ++i) out(r, cols[i]) = mean[cols[i]];
    }
    return out;
  };
}

ShadowModel TrainShadow(const AttackContext& ctx) {
  Require(ctx.pool != nullptr, ErrorCode::kInvalidArgument, "attack context is incomplete");
  CheckAux(ctx);
  auto rows = Concat(ctx.aux_members, ctx.aux_nonmembers);
  Rng rng(DeriveSeed(ctx.seed, "shadow-split"));
  Shuffle(rows, rng);
  ShadowModel shadow;
  const size_t half = rows.size() / 2;
  shadow.in_rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(half));
  shadow.out_rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(half), rows.end());
  auto config = ctx.settings.shadow;
  config.seed = DeriveSeed(ctx.seed, "shadow");
  const auto& pool = *ctx.pool;
  shadow.model = classifier::TrainClassifier(config, nn::SelectRows(pool.features(), shadow.in_rows),
                                             LabelsOf(pool, shadow.in_rows), pool.num_classes())
                     .Cast<double>();
  const auto acc = [&](const std::vector<size_t>& r) {
    return classifier::Accuracy(classifier::PredictConfidences(shadow.model, nn::SelectRows(pool.features(), r)),
                                LabelsOf(pool, r));
  };
  shadow.acc_in = acc(shadow.in_rows);
  shadow.acc_out = acc(shadow.out_rows);
  return shadow;
}

MembershipAttackResult NshAttack(const AttackContext& ctx) {
  const auto start = Clock::now();
  CheckContext(ctx);
  CheckAux(ctx);
  const auto& pool = *ctx.pool;
  const auto in = WithGroundTruth(Query(ctx, ctx.aux_members), LabelsOf(pool, ctx.aux_members));
  const auto out = WithGroundTruth(Query(ctx, ctx.aux_nonmembers), LabelsOf(pool, ctx.aux_nonmembers));
  const auto model = TrainBinaryAttack(ctx.settings, in, out, DeriveSeed(ctx.seed, "nsh"));
  const auto eval = MakeEvalSet(ctx);
  const auto scores = model.Predict(WithGroundTruth(Query(ctx, eval.rows), LabelsOf(pool, eval.rows)));
  return Finish("nsh", ctx, eval, Column(scores, 0), 0.5, start);
}

MembershipAttackResult MlleaksAttack(const AttackContext& ctx, const ShadowModel* shadow) {
  const auto start = Clock::now();
  CheckContext(ctx);
  std::optional<ShadowModel> own;
  if (shadow == nullptr) shadow = &own.emplace(TrainShadow(ctx));
  const auto& pool = *ctx.pool;
  const size_t top = ctx.settings.mlleaks_top_k;
  const auto shadow_conf = [&](const std::vector<size_t>& rows) {
    return SortedTop(classifier::PredictConfidences(shadow->model, nn::SelectRows(pool.features(), rows)), top);
  };
  const auto model =
      TrainBinaryAttack(ctx.settings, shadow_conf(shadow->in_rows), shadow_conf(shadow->out_rows),
                        DeriveSeed(ctx.seed, "mlleaks"));
  const auto eval = MakeEvalSet(ctx);
  const auto scores = model.Predict(SortedTop(Query(ctx, eval.rows), top));
  return Finish("mlleaks", ctx, eval, Column(scores, 0), 0.5, start);
}

MembershipAttackResult AdaptiveAttack(const AttackContext& ctx, const DefenseRecipe& recipe,
                                      const ShadowModel* shadow) {
  const auto start = Clock::now();
  CheckContext(ctx);
  std::optional<ShadowModel> own;
  if (shadow == nullptr) shadow = &own.emplace(TrainShadow(ctx));
  const auto& pool = *ctx.pool;

  const auto shadow_in = pool.Subset(shadow->in_rows, "shadow-in");
  std::optional<defense::PurifierBundle> bundle;
  if (recipe.purifier) {
    Require(!recipe.reference_rows.empty(), ErrorCode::kInvalidArgument, "adaptive attack needs reference rows");
    auto config = *recipe.purifier;
    config.seed = DeriveSeed(ctx.seed, "shadow-purifier");
    bundle = defense::TrainPurifier(shadow->model, shadow_in, pool.Subset(recipe.reference_rows, "reference"),
                                    shadow->acc_in, shadow->acc_out, config);
  }
  const auto shadow_view = [&](const std::vector<size_t>& rows) {
    const auto x = nn::SelectRows(pool.features(), rows);
    const auto conf = bundle ? defense::PurifyBatch(*bundle, shadow->model, x)
                             : classifier::PredictConfidences(shadow->model, x);
    return WithGroundTruth(conf, LabelsOf(pool, rows));
  };
  const auto model = TrainBinaryAttack(ctx.settings, shadow_view(shadow->in_rows), shadow_view(shadow->out_rows),
                                       DeriveSeed(ctx.seed, "adaptive"));
  const auto eval = MakeEvalSet(ctx);
  const auto scores = model.Predict(WithGroundTruth(Query(ctx, eval.rows), LabelsOf(pool, eval.rows)));
  return Finish("adaptive", ctx, eval, Column(scores, 0), 0.5, start);
}

nn::MatrixD BlindMiFeatures(const nn::MatrixD& confidences, std::span<const int> labels) {
  Require(confidences.rows() == labels.size(), ErrorCode::kDimensionMismatch, "label count mismatch");
  const auto top = SortedTop(confidences, 3);
  nn::MatrixD truth(confidences.rows(), 1);
  for (size_t r = 0; r < confidences.rows(); ++r) truth(r, 0) = confidences(r, static_cast<size_t>(labels[r]));
  return nn::ConcatCols(top, truth);
}

namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) total += (a[i] - b[i]) * (a[i] - b[i]);
  return total;
}

// Biased MMD^2 between index sets of a precomputed kernel matrix.
double MmdFromKernel(const nn::MatrixD& kernel, const std::vector<size_t>& a, const std::vector<size_t>& b) {
  const auto mean_block = [&](const std::vector<size_t>& x, const std::vector<size_t>& y) {
    double total = 0.0;
    for (size_t i : x) {
      for (size_t j : y) total += kernel(i, j);
    }
    return total / static_cast<double>(x.size() * y.size());
  };
  return mean_block(a, a) + mean_block(b, b) - 2.0 * mean_block(a, b);
}

nn::MatrixD GaussianKernel(const nn::MatrixD& points, double bandwidth) {
  const size_t n = points.rows();
  nn::MatrixD kernel(n, n);
  const double denom = 2.0 * bandwidth * bandwidth;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      const double k = std::exp(-SquaredDistance(points.row(i), points.row(j)) / denom);
      kernel(i, j) = k;
      kernel(j, i) = k;
    }
  }
  return kernel;
}

}  // namespace

double MedianPairwiseDistance(const nn::MatrixD& points) {
  std::vector<double> d;
  for (size_t i = 0; i < points.rows(); ++i) {
    for (size_t j = i + 1; j < points.rows(); ++j) d.push_back(std::sqrt(SquaredDistance(points.row(i), points.row(j))));
  }
  Require(!d.empty(), ErrorCode::kInvalidArgument, "bandwidth needs at least two points");
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double median = *mid;
  if (median <= 0.0) {
    double total = 0.0;
    size_t positive = 0;
    for (double v : d) {
      if (v > 0.0) {
        total += v;
        ++positive;
      }
    }
    Require(positive > 0, ErrorCode::kInvalidArgument, "degenerate kernel bandwidth: all points coincide");
    median = total / static_cast<double>(positive);
  }
  return median;
}

double Mmd(const nn::MatrixD& a, const nn::MatrixD& b, double bandwidth) {
  Require(a.rows() > 0 && b.rows() > 0, ErrorCode::kInvalidArgument, "MMD needs non-empty sets");
  Require(bandwidth > 0.0, ErrorCode::kInvalidArgument, "degenerate kernel bandwidth");
  const auto kernel = GaussianKernel(StackRows(a, b), bandwidth);
  std::vector<size_t> ia(a.rows()), ib(b.rows());
  for (size_t i = 0; i < ia.size(); ++i) ia[i] = i;
  for (size_t i = 0; i < ib.size(); ++i) ib[i] = a.rows() + i;
  return MmdFromKernel(kernel, ia, ib);
}

std::vector<double> DifferentialMmdScores(const nn::MatrixD& targets, const nn::MatrixD& probes) {
  Require(targets.rows() >= 2 && probes.rows() >= 1, ErrorCode::kInvalidArgument,
          "differential MMD needs two targets and one probe");
  const auto points = StackRows(targets, probes);
  const auto kernel = GaussianKernel(points, MedianPairwiseDistance(points));
  std::vector<size_t> t(targets.rows()), n(probes.rows());
  for (size_t i = 0; i < t.size(); ++i) t[i] = i;
  for (size_t i = 0; i < n.size(); ++i) n[i] = targets.rows() + i;
  const double base = MmdFromKernel(kernel, t, n);
  std::vector<double> scores(targets.rows());
  for (size_t c = 0; c < targets.rows(); ++c) {
    std::vector<size_t> rest;
    rest.reserve(t.size() - 1);
    for (size_t i : t) {
      if (i != c) rest.push_back(i);
    }
    auto moved = n;
    moved.push_back(c);
    scores[c] = base - MmdFromKernel(kernel, rest, moved);
  }
  return scores;
}

MembershipAttackResult BlindMiAttack(const AttackContext& ctx, const NonmemberTransform& transform) {
  const auto start = Clock::now();
  CheckContext(ctx);
  const auto& pool = *ctx.pool;
  NonmemberTransform probe = transform;
  if (!probe) {
    const auto known = Concat(ctx.aux_members, ctx.aux_nonmembers);
    Require(!known.empty(), ErrorCode::kInvalidArgument, "default probe transform needs auxiliary rows");
    std::vector<double> mean(pool.feature_dim(), 0.0);
    for (size_t r : known) {
      for (size_t c = 0; c < mean.size(); ++c) mean[c] += pool.features()(r, c);
    }
    for (double& m : mean) m /= static_cast<double>(known.size());
    probe = MeanReplacementTransform(std::move(mean), ctx.settings.blindmi_replace_fraction);
  }

  const auto eval = MakeEvalSet(ctx);
  Rng rng(DeriveSeed(ctx.seed, "blindmi"));
  // Candidates are visited in a shuffled order so each batch mixes both kinds.
  const auto order = Permutation(eval.rows.size(), rng);
  const size_t batch = std::max<size_t>(ctx.settings.blindmi_set_size, 2);
  std::vector<double> scores(eval.rows.size(), 0.0);
  for (size_t begin = 0; begin < order.size(); begin += batch) {
    const size_t end = std::min(order.size(), begin + batch);
    std::vector<size_t> rows;
    for (size_t i = begin; i < end; ++i) rows.push_back(eval.rows[order[i]]);
    if (rows.size() < 2) {
      // A lone trailing candidate joins the previous batch's decision rule.
      rows.insert(rows.begin(), eval.rows[order[begin - 1]]);
    }
    const auto labels = LabelsOf(pool, rows);
    const auto x = nn::SelectRows(pool.features(), rows);
    const auto targets = BlindMiFeatures(ctx.oracle->Query(x), labels);
    const auto probes = BlindMiFeatures(ctx.oracle->Query(probe(x, rng)), labels);
    const auto batch_scores = DifferentialMmdScores(targets, probes);
    const size_t offset = rows.size() - (end - begin);
    for (size_t i = begin; i < end; ++i) scores[order[i]] = batch_scores[offset + i - begin];
  }
  return Finish("blindmi", ctx, eval, std::move(scores), 0.0, start);
}

MembershipAttackResult GapAttack(const AttackContext& ctx) {
  const auto start = Clock::now();
  CheckContext(ctx);
  const auto eval = MakeEvalSet(ctx);
  const auto predicted = classifier::PredictLabels(Query(ctx, eval.rows));
  const auto labels = LabelsOf(*ctx.pool, eval.rows);
  std::vector<double> scores(eval.rows.size());
  for (size_t i = 0; i < scores.size(); ++i) scores[i] = predicted[i] == labels[i] ? 1.0 : 0.0;
  return Finish("gap", ctx, eval, std::move(scores), 0.5, start);
}

MembershipAttackResult TransferAttack(const AttackContext& ctx) {
  const auto start = Clock::now();
  CheckContext(ctx);
  CheckAux(ctx);
  const auto& pool = *ctx.pool;
  // The shadow learns the target's labels on all auxiliary rows; their known
  // membership then picks the threshold.
  const auto train_rows = Concat(ctx.aux_members, ctx.aux_nonmembers);
  std::vector<int> calib_member(train_rows.size(), 0);
  std::fill(calib_member.begin(), calib_member.begin() + static_cast<std::ptrdiff_t>(ctx.aux_members.size()), 1);

  const auto relabeled = classifier::PredictLabels(Query(ctx, train_rows));
  auto config = ctx.settings.shadow;
  config.seed = DeriveSeed(ctx.seed, "transfer-shadow");
  const auto shadow = classifier::TrainClassifier(config, nn::SelectRows(pool.features(), train_rows), relabeled,
                                                  pool.num_classes())
                          .Cast<double>();
  const auto score = [&](const std::vector<size_t>& rows) {
    const auto assigned = classifier::PredictLabels(Query(ctx, rows));
    const auto conf = classifier::PredictConfidences(shadow, nn::SelectRows(pool.features(), rows));
    std::vector<double> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out[i] = conf(i, static_cast<size_t>(assigned[i]));
    return out;
  };
  const double threshold = BestThreshold(score(train_rows), calib_member);
  const auto eval = MakeEvalSet(ctx);
  return Finish("transfer", ctx, eval, score(eval.rows), threshold, start);
}

InversionResult InversionAttack(const AttackContext& ctx, const std::vector<size_t>& rows) {
  Require(ctx.oracle != nullptr && ctx.pool != nullptr, ErrorCode::kInvalidArgument, "attack context is incomplete");
  auto shuffled = rows;
  Rng rng(DeriveSeed(ctx.seed, "inversion-split"));
  Shuffle(shuffled, rng);
  const size_t train_count =
      static_cast<size_t>(std::llround(ctx.settings.inversion_train_fraction * static_cast<double>(rows.size())));
  Require(train_count > 0 && train_count < rows.size(), ErrorCode::kInvalidArgument, "inversion split is empty");
  const std::vector<size_t> train(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(train_count));
  const std::vector<size_t> test(shuffled.begin() + static_cast<std::ptrdiff_t>(train_count), shuffled.end());
  const auto features = [&](const std::vector<size_t>& r) {
    const auto conf = Query(ctx, r);
    return ctx.settings.inversion_log_features ? LogFeatures(conf) : conf;
  };
  const auto& pool = *ctx.pool;
  const auto train_x = nn::SelectRows(pool.features(), train);
  const auto model = TrainAttackModel(ctx.settings, features(train), &train_x, {}, pool.feature_dim(),
                                      nn::Activation::kIdentity, ctx.settings.inversion_epochs,
                                      DeriveSeed(ctx.seed, "inversion"));
  const auto reconstruction = model.Predict(features(test));
  InversionResult result;
  result.error = nn::Mse(reconstruction, nn::SelectRows(pool.features(), test));
  result.train_rows = train.size();
  result.test_rows = test.size();
  return result;
}

AttributeResult AttributeAttack(const AttackContext& ctx) {
  CheckContext(ctx);
  CheckAux(ctx);
  const auto& pool = *ctx.pool;
  Require(pool.has_sensitive(), ErrorCode::kInvalidArgument, "dataset has no sensitive attribute");
  const auto sensitive_of = [&](const std::vector<size_t>& rows) {
    std::vector<int> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out[i] = pool.sensitive()[rows[i]];
    return out;
  };
  const auto train_rows = Concat(ctx.aux_members, ctx.aux_nonmembers);
  const auto eval_rows = Concat(ctx.eval_members, ctx.eval_nonmembers);
  const auto model = TrainAttackModel(ctx.settings, Query(ctx, train_rows), nullptr, sensitive_of(train_rows),
                                      pool.num_sensitive(), nn::Activation::kSoftmax, ctx.settings.epochs,
                                      DeriveSeed(ctx.seed, "attribute"));
  const auto predicted = classifier::PredictLabels(model.Predict(Query(ctx, eval_rows)));
  const auto truth = sensitive_of(eval_rows);
  size_t hits = 0;
  for (size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return {static_cast<double>(hits) / static_cast<double>(truth.size()), pool.num_sensitive()};
}

std::string AttackResultJson(const MembershipAttackResult& result) {
  nlohmann::ordered_json j;
  j["attack"] = result.attack;
  j["target_arm"] = result.target_arm;
  j["accuracy"] = result.accuracy;
  j["auc"] = result.auc;
  j["threshold"] = result.threshold;
  j["seed"] = result.seed;
  j["wall_clock"] = result.wall_clock;
  return j.dump(2) + "\n";
}

std::string BoundaryAttackStubJson(const std::string& target_arm, uint64_t seed) {
  nlohmann::ordered_json j;
  j["attack"] = "boundary";
  j["target_arm"] = target_arm;
  j["status"] = "not implemented";
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

}  // namespace purifier::attacks
