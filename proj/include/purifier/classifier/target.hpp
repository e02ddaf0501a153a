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
#ifndef PURIFIER_CLASSIFIER_TARGET_HPP_
#define PURIFIER_CLASSIFIER_TARGET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "purifier/common/confidence.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/nn/mlp.hpp"
#include "purifier/nn/train.hpp"

namespace purifier::classifier {

struct ClassifierConfig {
  std::vector<size_t> hidden_sizes = {128, 64, 32};
  nn::Activation hidden_activation = nn::Activation::kTanh;
  nn::OptimizerConfig optimizer;  // includes the L2 weight decay
  std::vector<nn::LrMilestone> schedule;
  size_t epochs = 100;
  size_t batch_size = 64;
  double init_stddev = 0.01;
  uint64_t seed = 0;
  // When set, the report records whether acc_train - acc_test reached it.
  std::optional<double> min_overfit_gap;
};

struct TrainReport {
  double acc_train = 0.0;
  double acc_test = 0.0;
  std::vector<double> loss_curve;
  double train_seconds = 0.0;
  std::optional<bool> overfit_gap_met;
};

struct TrainedClassifier {
  nn::Mlp<float> model;
  TrainReport report;
};

// Trains on d1 (softmax cross entropy) and measures accuracy on d1 and d3.
TrainedClassifier TrainTarget(const ClassifierConfig& config, const data::Dataset& d1, const data::Dataset& d3);

// Fits a model with the target's architecture on arbitrary labels.
nn::Mlp<float> TrainClassifier(const ClassifierConfig& config, const nn::MatrixD& features,
                               std::span<const int> labels, size_t num_classes,
                               std::vector<double>* loss_curve = nullptr);

// Confidence scores are evaluated in double precision from the stored
// parameters, so a model reloaded from disk reproduces them bit for bit.
nn::MatrixD PredictConfidences(const nn::Mlp<double>& model, const nn::MatrixD& inputs);
ConfidenceVector PredictConfidence(const nn::Mlp<double>& model, std::span<const double> input);

std::vector<int> PredictLabels(const nn::MatrixD& confidences);
double Accuracy(const nn::MatrixD& confidences, std::span<const int> labels);

std::string TrainReportJson(const TrainReport& report);

}  // namespace purifier::classifier

#endif  // PURIFIER_CLASSIFIER_TARGET_HPP_
