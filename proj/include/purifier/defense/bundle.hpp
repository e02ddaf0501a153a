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
#ifndef PURIFIER_DEFENSE_BUNDLE_HPP_
#define PURIFIER_DEFENSE_BUNDLE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "purifier/common/confidence.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/defense/reformer.hpp"
#include "purifier/defense/swapper.hpp"
#include "purifier/nn/mlp.hpp"

namespace purifier::defense {

struct PurifierFlags {
  bool reformer_enabled = true;
  bool swapper_enabled = true;

  bool operator==(const PurifierFlags&) const = default;
};

struct PurifierConfig {
  CvaeConfig cvae;
  size_t k_nn = 1;
  double tau_floor = 1e-6;
  PurifierFlags flags;
  uint64_t seed = 0;
};

struct PurifierBundle {
  ConfidenceReformer reformer;
  PredictionIndex index;
  SwapPlan swap_plan;
  PurifierFlags flags;
  double label_weight = 0.0;
  double kl_weight = 0.0;
  uint64_t noise_seed = 0;
};

// Trains G on the reference set D2 and indexes the swap members of D1.
PurifierBundle TrainPurifier(const nn::Mlp<double>& target, const data::Dataset& d1, const data::Dataset& d2,
                             double acc_train, double acc_test, const PurifierConfig& config);

// p = G(c) (if enabled); swapped when c matches the index (if enabled).
nn::MatrixD PurifyConfidences(const PurifierBundle& bundle, const nn::MatrixD& confidences);
ConfidenceVector PurifyConfidence(const PurifierBundle& bundle, const ConfidenceVector& c);

nn::MatrixD PurifyBatch(const PurifierBundle& bundle, const nn::Mlp<double>& target, const nn::MatrixD& inputs);
ConfidenceVector Purify(const PurifierBundle& bundle, const nn::Mlp<double>& target, std::span<const double> x);

inline constexpr std::string_view kIndexMagic = "PRFI";

std::string EncodeIndex(const PredictionIndex& index);
// k_nn and tau come from the sidecar.
PredictionIndex DecodeIndex(std::string_view bytes, size_t k_nn, double tau, const std::string& source);

// Writes encoder.prfm, decoder.prfm, index.prfi and bundle.json into dir.
void SaveBundle(const std::filesystem::path& dir, const PurifierBundle& bundle);
PurifierBundle LoadBundle(const std::filesystem::path& dir);

}  // namespace purifier::defense

#endif  // PURIFIER_DEFENSE_BUNDLE_HPP_
