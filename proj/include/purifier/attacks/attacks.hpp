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
#ifndef PURIFIER_ATTACKS_ATTACKS_HPP_
#define PURIFIER_ATTACKS_ATTACKS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "purifier/attacks/oracle.hpp"
#include "purifier/classifier/target.hpp"
#include "purifier/common/random.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/defense/bundle.hpp"
#include "purifier/nn/mlp.hpp"

namespace purifier::attacks {

// Maps inputs to probe non-members.
using NonmemberTransform = std::function<nn::MatrixD(const nn::MatrixD& inputs, Rng& rng)>;

// Replaces a random fraction of each row's features with the population mean.
NonmemberTransform MeanReplacementTransform(std::vector<double> population_mean, double fraction);

struct AttackSettings {
  size_t hidden_units = 128;
  size_t epochs = 50;
  double learning_rate = 1e-3;
  size_t batch_size = 64;
  double init_stddev = 0.01;
  // Shadow models mirror the target's architecture and training recipe.
  classifier::ClassifierConfig shadow;
  size_t mlleaks_top_k = 3;  // 0 keeps the full sorted vector
  size_t blindmi_set_size = 20;
  double blindmi_replace_fraction = 0.5;
  double inversion_train_fraction = 0.8;
  bool inversion_log_features = true;
  size_t inversion_epochs = 50;
};

// Rows index into pool. Evaluation rows are held out from everything the
// attack trains on.
struct AttackContext {
  const QueryInterface* oracle = nullptr;
  const data::Dataset* pool = nullptr;
  std::vector<size_t> aux_members;     // known members
  std::vector<size_t> aux_nonmembers;  // known non-members
  std::vector<size_t> eval_members;
  std::vector<size_t> eval_nonmembers;
  std::string target_arm = "none";
  uint64_t seed = 0;
  AttackSettings settings;
};

struct MembershipAttackResult {
  std::string attack;
  std::string target_arm;
  std::vector<double> scores;
  std::vector<int> is_member;
  double threshold = 0.5;
  double accuracy = 0.0;
  double auc = 0.5;
  uint64_t seed = 0;
  double wall_clock = 0.0;
};

// Shadow trained on half of the auxiliary data; the other half is its "out" set.
struct ShadowModel {
  nn::Mlp<double> model;
  std::vector<size_t> in_rows;
  std::vector<size_t> out_rows;
  double acc_in = 0.0;
  double acc_out = 0.0;
};

ShadowModel TrainShadow(const AttackContext& ctx);

// Knows membership and ground truth of the auxiliary data; no shadow.
MembershipAttackResult NshAttack(const AttackContext& ctx);

MembershipAttackResult MlleaksAttack(const AttackContext& ctx, const ShadowModel* shadow = nullptr);

// The attacker's copy of the defense: the recipe plus the reference rows.
struct DefenseRecipe {
  std::optional<defense::PurifierConfig> purifier;  // empty: undefended
  std::vector<size_t> reference_rows;
};

MembershipAttackResult AdaptiveAttack(const AttackContext& ctx, const DefenseRecipe& recipe,
                                      const ShadowModel* shadow = nullptr);

// Blind differential MMD attack over the evaluation rows. The default
// transform is MeanReplacementTransform over the auxiliary population.
MembershipAttackResult BlindMiAttack(const AttackContext& ctx, const NonmemberTransform& transform = {});

// Features: top-3 sorted confidences plus the ground-truth confidence.
nn::MatrixD BlindMiFeatures(const nn::MatrixD& confidences, std::span<const int> labels);

// Gaussian-kernel MMD^2 (biased estimator).
double Mmd(const nn::MatrixD& a, const nn::MatrixD& b, double bandwidth);
double MedianPairwiseDistance(const nn::MatrixD& points);

// Differential scores for each row of targets: MMD(T, N) - MMD(T \ t, N + t).
// Positive means member.
std::vector<double> DifferentialMmdScores(const nn::MatrixD& targets, const nn::MatrixD& probes);

MembershipAttackResult GapAttack(const AttackContext& ctx);

// Label-only transfer attack; the result's headline metric is auc.
MembershipAttackResult TransferAttack(const AttackContext& ctx);

struct InversionResult {
  double error = 0.0;  // mean squared error per feature on held-out rows
  size_t train_rows = 0;
  size_t test_rows = 0;
};

// rows are shuffled and split train_fraction / rest.
InversionResult InversionAttack(const AttackContext& ctx, const std::vector<size_t>& rows);

struct AttributeResult {
  double accuracy = 0.0;
  size_t num_sensitive = 0;
};

// Trains on the auxiliary rows, evaluates on the evaluation rows.
AttributeResult AttributeAttack(const AttackContext& ctx);

std::string AttackResultJson(const MembershipAttackResult& result);
std::string BoundaryAttackStubJson(const std::string& target_arm, uint64_t seed);

}  // namespace purifier::attacks

#endif  // PURIFIER_ATTACKS_ATTACKS_HPP_
