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
#include "purifier/nn/optimizer.hpp"

#include <cmath>
#include <string>

namespace purifier::nn {

std::string_view OptimizerKindName(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind ParseOptimizerKind(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  Fail(ErrorCode::kInvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

template <typename Scalar>
void SgdUpdate(std::span<Scalar> params, std::span<const Scalar> grads, double learning_rate) {
  Require(params.size() == grads.size(), ErrorCode::kDimensionMismatch, "sgd: shape mismatch");
  const Scalar lr = static_cast<Scalar>(learning_rate);
  for (size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

template <typename Scalar>
void AdamUpdate(std::span<Scalar> params, std::span<const Scalar> grads, std::span<Scalar> first_moment,
                std::span<Scalar> second_moment, int64_t step, const OptimizerConfig& config) {
  Require(params.size() == grads.size() && params.size() == first_moment.size() &&
              params.size() == second_moment.size(),
          ErrorCode::kDimensionMismatch, "adam: shape mismatch");
  Require(step >= 1, ErrorCode::kInvalidArgument, "adam: step must be >= 1");
  const Scalar b1 = static_cast<Scalar>(config.beta1);
  const Scalar b2 = static_cast<Scalar>(config.beta2);
  const Scalar c1 = static_cast<Scalar>(1.0 - std::pow(config.beta1, static_cast<double>(step)));
  const Scalar c2 = static_cast<Scalar>(1.0 - std::pow(config.beta2, static_cast<double>(step)));
  const Scalar lr = static_cast<Scalar>(config.learning_rate);
  const Scalar eps = static_cast<Scalar>(config.epsilon);
  for (size_t i = 0; i < params.size(); ++i) {
    const Scalar g = grads[i];
    first_moment[i] = b1 * first_moment[i] + (Scalar{1} - b1) * g;
    second_moment[i] = b2 * second_moment[i] + (Scalar{1} - b2) * g * g;
    const Scalar m_hat = first_moment[i] / c1;
    const Scalar v_hat = second_moment[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <typename Scalar>
Optimizer<Scalar>::Optimizer(const OptimizerConfig& config, const Mlp<Scalar>& model)
    : config_(config), first_(ZeroGradients(model)), second_(ZeroGradients(model)) {
  Require(config.learning_rate > 0.0, ErrorCode::kInvalidArgument, "learning rate must be positive");
}

template <typename Scalar>
void Optimizer<Scalar>::Step(Mlp<Scalar>& model, const MlpGradients<Scalar>& grads) {
  auto& layers = model.mutable_layers();
  Require(grads.weights.size() == layers.size() && grads.biases.size() == layers.size(),
          ErrorCode::kDimensionMismatch, "optimizer: gradient count does not match model");
  for (size_t i = 0; i < layers.size(); ++i) {
    Require(grads.weights[i].AllFinite() && grads.biases[i].AllFinite(), ErrorCode::kNonFinite,
            "optimizer: non-finite gradient in layer " + std::to_string(i));
  }
  ++step_;
  for (size_t i = 0; i < layers.size(); ++i) {
    Matrix<Scalar> wgrad = grads.weights[i];
    if (config_.weight_decay != 0.0) {
      const Scalar wd = static_cast<Scalar>(config_.weight_decay);
      auto gv = wgrad.values();
      const auto pv = layers[i].weights.values();
      for (size_t j = 0; j < gv.size(); ++j) gv[j] += wd * pv[j];
    }
    if (config_.kind == OptimizerKind::kSgd) {
      SgdUpdate<Scalar>(layers[i].weights.values(), wgrad.values(), config_.learning_rate);
      SgdUpdate<Scalar>(layers[i].bias.values(), grads.biases[i].values(), config_.learning_rate);
    } else {
      AdamUpdate<Scalar>(layers[i].weights.values(), wgrad.values(), first_.weights[i].values(),
                         second_.weights[i].values(), step_, config_);
      AdamUpdate<Scalar>(layers[i].bias.values(), grads.biases[i].values(), first_.biases[i].values(),
                         second_.biases[i].values(), step_, config_);
    }
  }
}

#define PURIFIER_INSTANTIATE_OPT(S)                                                           \
  template void SgdUpdate(std::span<S>, std::span<const S>, double);                          \
  template void AdamUpdate(std::span<S>, std::span<const S>, std::span<S>, std::span<S>, int64_t, \
                           const OptimizerConfig&);                                           \
  template class Optimizer<S>;

PURIFIER_INSTANTIATE_OPT(float)
PURIFIER_INSTANTIATE_OPT(double)

#undef PURIFIER_INSTANTIATE_OPT

}  // namespace purifier::nn
