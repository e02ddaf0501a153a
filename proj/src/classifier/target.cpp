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
#include "purifier/classifier/target.hpp"

#include <chrono>
#include <string>

#include "json.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/random.hpp"

namespace purifier::classifier {

nn::Mlp<float> TrainClassifier(const ClassifierConfig& config, const nn::MatrixD& features,
                               std::span<const int> labels, size_t num_classes,
                               std::vector<double>* loss_curve) {
  Require(config.epochs > 0, ErrorCode::kConfig, "classifier epochs must be positive");
  Require(features.rows() == labels.size(), ErrorCode::kDimensionMismatch, "feature rows != label count");
  Require(features.rows() > 0, ErrorCode::kInvalidArgument, "empty training set");
  Require(num_classes >= 2, ErrorCode::kInvalidArgument, "classifier needs at least two classes");

  std::vector<size_t> sizes{features.cols()};
  sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  sizes.push_back(num_classes);
  auto model = nn::Mlp<float>::Initialize(nn::ChainSpecs(sizes, config.hidden_activation, nn::Activation::kSoftmax),
                                          DeriveSeed(config.seed, "classifier-init"), config.init_stddev);

  nn::TrainOptions options;
  options.epochs = config.epochs;
  options.batch_size = config.batch_size;
  options.optimizer = config.optimizer;
  options.schedule = config.schedule;
  options.seed = DeriveSeed(config.seed, "classifier-fit");
  options.loss = nn::LossKind::kCrossEntropy;
  auto curve = nn::Fit(model, features.Cast<float>(), nullptr, labels, options);
  if (loss_curve != nullptr) *loss_curve = std::move(curve);
  return model;
}

TrainedClassifier TrainTarget(const ClassifierConfig& config, const data::Dataset& d1, const data::Dataset& d3) {
  Require(d1.feature_dim() == d3.feature_dim(), ErrorCode::kDimensionMismatch, "train/test feature dims differ");
  const auto start = std::chrono::steady_clock::now();
  TrainedClassifier out;
  out.model = TrainClassifier(config, d1.features(), d1.labels(), d1.num_classes(), &out.report.loss_curve);
  out.report.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto inference = out.model.Cast<double>();
  out.report.acc_train = Accuracy(PredictConfidences(inference, d1.features()), d1.labels());
  out.report.acc_test = d3.size() == 0 ? 0.0 : Accuracy(PredictConfidences(inference, d3.features()), d3.labels());
  if (config.min_overfit_gap) {
    out.report.overfit_gap_met = out.report.acc_train - out.report.acc_test >= *config.min_overfit_gap;
  }
  return out;
}

nn::MatrixD PredictConfidences(const nn::Mlp<double>& model, const nn::MatrixD& inputs) {
  Require(inputs.cols() == model.input_dim(), ErrorCode::kDimensionMismatch,
          "input has " + std::to_string(inputs.cols()) + " features, model expects " +
              std::to_string(model.input_dim()));
  return nn::Predict(model, inputs);
}

ConfidenceVector PredictConfidence(const nn::Mlp<double>& model, std::span<const double> input) {
  nn::MatrixD batch(1, input.size(), std::vector<double>(input.begin(), input.end()));
  return RowConfidence(PredictConfidences(model, batch), 0);
}

std::vector<int> PredictLabels(const nn::MatrixD& confidences) {
  std::vector<int> out(confidences.rows());
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(nn::ArgMax(confidences.row(i)));
  return out;
}

double Accuracy(const nn::MatrixD& confidences, std::span<const int> labels) {
  Require(confidences.rows() == labels.size(), ErrorCode::kDimensionMismatch, "confidence rows != label count");
  if (labels.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    hits += static_cast<int>(nn::ArgMax(confidences.row(i))) == labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

std::string TrainReportJson(const TrainReport& report) {
  nlohmann::ordered_json j;
  j["acc_train"] = report.acc_train;
  j["acc_test"] = report.acc_test;
  j["loss_curve"] = report.loss_curve;
  j["train_seconds"] = report.train_seconds;
  if (report.overfit_gap_met) j["overfit_gap_met"] = *report.overfit_gap_met;
  return j.dump(2) + "\n";
}

}  // namespace purifier::classifier
