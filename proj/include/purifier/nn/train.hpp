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
#ifndef PURIFIER_NN_TRAIN_HPP_
#define PURIFIER_NN_TRAIN_HPP_

#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "purifier/nn/loss.hpp"
#include "purifier/nn/optimizer.hpp"

namespace purifier::nn {

// Learning rate switches to `learning_rate` at the start of `epoch` (0-based).
struct LrMilestone {
  size_t epoch = 0;
  double learning_rate = 0.0;
};

struct TrainOptions {
  size_t epochs = 1;
  size_t batch_size = 64;
  OptimizerConfig optimizer;
  std::vector<LrMilestone> schedule;
  uint64_t seed = 0;
  LossKind loss = LossKind::kCrossEntropy;
  double label_weight = 1.0;
};

// Mini-batch training with a seeded per-epoch shuffle. Returns the mean loss
// of each epoch.
template <typename Scalar>
std::vector<double> Fit(Mlp<Scalar>& model, const Matrix<Scalar>& inputs,
                        const std::type_identity_t<Matrix<Scalar>>* values,
                        std::span<const int> labels, const TrainOptions& options);

}  // namespace purifier::nn

#endif  // PURIFIER_NN_TRAIN_HPP_
