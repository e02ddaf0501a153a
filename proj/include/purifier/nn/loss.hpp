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
#ifndef PURIFIER_NN_LOSS_HPP_
#define PURIFIER_NN_LOSS_HPP_

#include <span>
#include <string_view>

#include "purifier/nn/matrix.hpp"
#include "purifier/nn/mlp.hpp"

namespace purifier::nn {

inline constexpr double kProbabilityFloor = 1e-12;

enum class LossKind {
  kCrossEntropy,
  kMse,
  // mse(output, values) + label_weight * cross_entropy(output, labels)
  kComposite,
};

std::string_view LossKindName(LossKind kind);

// Mean over rows of -log(max(p[label], floor)). A single-column input is
// treated as a sigmoid probability of class 1 (binary cross entropy).
template <typename Scalar>
double CrossEntropy(const Matrix<Scalar>& pred, std::span<const int> labels);

// Mean of squared element differences.
template <typename Scalar>
double Mse(const Matrix<Scalar>& a, const Matrix<Scalar>& b);

template <typename Scalar>
struct LossTargets {
  const Matrix<Scalar>* values = nullptr;
  std::span<const int> labels;
  double label_weight = 1.0;
};

template <typename Scalar>
struct LossEvaluation {
  double value = 0.0;
  Matrix<Scalar> preact_grad;
};

// Loss value and its gradient w.r.t. the head's pre-activation. Softmax and
// sigmoid heads under cross entropy use the fused (p - y) / n form.
template <typename Scalar>
LossEvaluation<Scalar> EvaluateLoss(LossKind kind, Activation head, const Matrix<Scalar>& output,
                                    const LossTargets<Scalar>& targets);

template <typename Scalar>
struct GradientResult {
  double loss = 0.0;
  MlpGradients<Scalar> gradients;
};

template <typename Scalar>
GradientResult<Scalar> ComputeGradients(const Mlp<Scalar>& model, const Matrix<Scalar>& batch,
                                        const LossTargets<Scalar>& targets, LossKind kind);

}  // namespace purifier::nn

#endif  // PURIFIER_NN_LOSS_HPP_
