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
#include "purifier/nn/train.hpp"

#include <algorithm>
#include <string>

#include "purifier/common/random.hpp"

namespace purifier::nn {

template <typename Scalar>
std::vector<double> Fit(Mlp<Scalar>& model, const Matrix<Scalar>& inputs,
                        const std::type_identity_t<Matrix<Scalar>>* values,
                        std::span<const int> labels, const TrainOptions& options) {
  Require(options.epochs >= 1, ErrorCode::kInvalidArgument, "epochs must be >= 1");
  Require(options.batch_size >= 1, ErrorCode::kInvalidArgument, "batch size must be >= 1");
  Require(inputs.rows() > 0, ErrorCode::kInvalidArgument, "empty training set");
  const bool needs_labels = options.loss != LossKind::kMse;
  const bool needs_values = options.loss != LossKind::kCrossEntropy;
  if (needs_labels) {
    Require(labels.size() == inputs.rows(), ErrorCode::kDimensionMismatch, "label count != input rows");
  }
  if (needs_values) {
    Require(values != nullptr && values->rows() == inputs.rows(), ErrorCode::kDimensionMismatch,
            "target rows != input rows");
  }

  Optimizer<Scalar> optimizer(options.optimizer, model);
  Rng rng(DeriveSeed(options.seed, "fit-shuffle"));
  const size_t n = inputs.rows();
  std::vector<double> curve;
  curve.reserve(options.epochs);
  std::vector<int> batch_labels;

  for (size_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (const auto& m : options.schedule) {
      if (m.epoch == epoch) optimizer.set_learning_rate(m.learning_rate);
    }
    const auto order = Permutation(n, rng);
    double total = 0.0;
    for (size_t start = 0; start < n; start += options.batch_size) {
      const size_t end = std::min(n, start + options.batch_size);
      const std::span<const size_t> idx(order.data() + start, end - start);
      const Matrix<Scalar> x = SelectRows(inputs, idx);
      Matrix<Scalar> y;
      LossTargets<Scalar> targets;
      targets.label_weight = options.label_weight;
      if (needs_values) {
        y = SelectRows(*values, idx);
        targets.values = &y;
      }
      if (needs_labels) {
        batch_labels.clear();
        for (size_t i : idx) batch_labels.push_back(labels[i]);
        targets.labels = batch_labels;
      }
      auto step = ComputeGradients(model, x, targets, options.loss);
      optimizer.Step(model, step.gradients);
      total += step.loss * static_cast<double>(idx.size());
    }
    curve.push_back(total / static_cast<double>(n));
  }
  return curve;
}

template std::vector<double> Fit(Mlp<float>&, const Matrix<float>&, const Matrix<float>*, std::span<const int>,
                                 const TrainOptions&);
template std::vector<double> Fit(Mlp<double>&, const Matrix<double>&, const Matrix<double>*,
                                 std::span<const int>, const TrainOptions&);

}  // namespace purifier::nn
