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
#ifndef PURIFIER_NN_OPTIMIZER_HPP_
#define PURIFIER_NN_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <string_view>

#include "purifier/nn/mlp.hpp"

namespace purifier::nn {

enum class OptimizerKind { kSgd, kAdam };

std::string_view OptimizerKindName(OptimizerKind kind);
OptimizerKind ParseOptimizerKind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // L2 coefficient added to weight gradients (biases are not decayed).
  double weight_decay = 0.0;
};

// theta <- theta - lr * g
template <typename Scalar>
void SgdUpdate(std::span<Scalar> params, std::span<const Scalar> grads, double learning_rate);

// Bias-corrected Adam update; step is 1-based.
template <typename Scalar>
void AdamUpdate(std::span<Scalar> params, std::span<const Scalar> grads, std::span<Scalar> first_moment,
                std::span<Scalar> second_moment, int64_t step, const OptimizerConfig& config);

template <typename Scalar>
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const Mlp<Scalar>& model);

  // Rejects non-finite gradients before touching the parameters.
  void Step(Mlp<Scalar>& model, const MlpGradients<Scalar>& grads);

  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  const OptimizerConfig& config() const { return config_; }
  int64_t step_count() const { return step_; }

 private:
  OptimizerConfig config_;
  int64_t step_ = 0;
  MlpGradients<Scalar> first_;
  MlpGradients<Scalar> second_;
};

}  // namespace purifier::nn

#endif  // PURIFIER_NN_OPTIMIZER_HPP_
