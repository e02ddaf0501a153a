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
#include "purifier/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace purifier::nn {
namespace {

template <typename Scalar>
void CheckLabels(const Matrix<Scalar>& pred, std::span<const int> labels) {
  Require(labels.size() == pred.rows(), ErrorCode::kDimensionMismatch,
          "cross entropy: " + std::to_string(labels.size()) + " labels for " + std::to_string(pred.rows()) +
              " rows");
  const int classes = pred.cols() == 1 ? 2 : static_cast<int>(pred.cols());
  for (int label : labels) {
    Require(label >= 0 && label < classes, ErrorCode::kInvalidArgument,
            "label " + std::to_string(label) + " out of range [0," + std::to_string(classes) + ")");
  }
}

}  // namespace

std::string_view LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kCrossEntropy:
      return "cross_entropy";
    case LossKind::kMse:
      return "mse";
    case LossKind::kComposite:
      return "composite";
  }
  return "unknown";
}

template <typename Scalar>
double CrossEntropy(const Matrix<Scalar>& pred, std::span<const int> labels) {
  CheckLabels(pred, labels);
  if (pred.rows() == 0) return 0.0;
  double total = 0.0;
  for (size_t r = 0; r < pred.rows(); ++r) {
    double p;
    if (pred.cols() == 1) {
      const double p1 = static_cast<double>(pred(r, 0));
      p = labels[r] == 1 ? p1 : 1.0 - p1;
    } else {
      p = static_cast<double>(pred(r, static_cast<size_t>(labels[r])));
    }
    total -= std::log(std::max(p, kProbabilityFloor));
  }
  return total / static_cast<double>(pred.rows());
}

template <typename Scalar>
double Mse(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kDimensionMismatch, "mse: shape mismatch");
  if (a.size() == 0) return 0.0;
  double total = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = static_cast<double>(av[i]) - static_cast<double>(bv[i]);
    total += d * d;
  }
  return total / static_cast<double>(a.size());
}

template <typename Scalar>
LossEvaluation<Scalar> EvaluateLoss(LossKind kind, Activation head, const Matrix<Scalar>& output,
                                    const LossTargets<Scalar>& targets) {
  LossEvaluation<Scalar> eval;
  eval.preact_grad = Matrix<Scalar>(output.rows(), output.cols());
  const Scalar inv_rows = Scalar{1} / static_cast<Scalar>(std::max<size_t>(output.rows(), 1));

  if (kind == LossKind::kMse || kind == LossKind::kComposite) {
    Require(targets.values != nullptr, ErrorCode::kInvalidArgument, "mse loss needs target values");
    const auto& want = *targets.values;
    eval.value += Mse(output, want);
    Matrix<Scalar> dout(output.rows(), output.cols());
    const Scalar scale = Scalar{2} / static_cast<Scalar>(std::max<size_t>(output.size(), 1));
    auto dv = dout.values();
    const auto ov = output.values();
    const auto wv = want.values();
    for (size_t i = 0; i < dv.size(); ++i) dv[i] = scale * (ov[i] - wv[i]);
    eval.preact_grad = ActivationBackward(head, output, dout);
  }

  if (kind == LossKind::kCrossEntropy || kind == LossKind::kComposite) {
    const double weight = kind == LossKind::kComposite ? targets.label_weight : 1.0;
    eval.value += weight * CrossEntropy(output, targets.labels);
    const Scalar w = static_cast<Scalar>(weight);
    const bool fused = (head == Activation::kSoftmax && output.cols() > 1) ||
                       (head == Activation::kSigmoid && output.cols() == 1);
    if (fused) {
      for (size_t r = 0; r < output.rows(); ++r) {
        for (size_t c = 0; c < output.cols(); ++c) {
          const Scalar target = output.cols() == 1 ? static_cast<Scalar>(targets.labels[r])
                                                   : (static_cast<size_t>(targets.labels[r]) == c ? Scalar{1} : Scalar{0});
          eval.preact_grad(r, c) += w * (output(r, c) - target) * inv_rows;
        }
      }
    } else {
      Matrix<Scalar> dout(output.rows(), output.cols());
      for (size_t r = 0; r < output.rows(); ++r) {
        if (output.cols() == 1) {
          const double p1 = static_cast<double>(output(r, 0));
          if (targets.labels[r] == 1) {
            if (p1 > kProbabilityFloor) dout(r, 0) = static_cast<Scalar>(-1.0 / p1);
          } else if (1.0 - p1 > kProbabilityFloor) {
            dout(r, 0) = static_cast<Scalar>(1.0 / (1.0 - p1));
          }
        } else {
          const size_t label = static_cast<size_t>(targets.labels[r]);
          const double p = static_cast<double>(output(r, label));
          if (p > kProbabilityFloor) dout(r, label) = static_cast<Scalar>(-1.0 / p);
        }
      }
      auto back = ActivationBackward(head, output, dout);
      auto gv = eval.preact_grad.values();
      const auto bv = back.values();
      for (size_t i = 0; i < gv.size(); ++i) gv[i] += w * bv[i] * inv_rows;
    }
  }

  Require(std::isfinite(eval.value), ErrorCode::kNonFinite,
          "non-finite " + std::string(LossKindName(kind)) + " loss");
  return eval;
}

template <typename Scalar>
GradientResult<Scalar> ComputeGradients(const Mlp<Scalar>& model, const Matrix<Scalar>& batch,
                                        const LossTargets<Scalar>& targets, LossKind kind) {
  const auto acts = Forward(model, batch);
  auto eval = EvaluateLoss(kind, model.layers().back().spec.activation, acts.back(), targets);
  GradientResult<Scalar> result;
  result.loss = eval.value;
  result.gradients = Backward(model, acts, std::move(eval.preact_grad), false).params;
  return result;
}

#define PURIFIER_INSTANTIATE_LOSS(S)                                                                 \
  template double CrossEntropy(const Matrix<S>&, std::span<const int>);                              \
  template double Mse(const Matrix<S>&, const Matrix<S>&);                                           \
  template LossEvaluation<S> EvaluateLoss(LossKind, Activation, const Matrix<S>&, const LossTargets<S>&); \
  template GradientResult<S> ComputeGradients(const Mlp<S>&, const Matrix<S>&, const LossTargets<S>&, LossKind);

PURIFIER_INSTANTIATE_LOSS(float)
PURIFIER_INSTANTIATE_LOSS(double)

#undef PURIFIER_INSTANTIATE_LOSS

}  // namespace purifier::nn
