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
#ifndef PURIFIER_DEFENSE_REFORMER_HPP_
#define PURIFIER_DEFENSE_REFORMER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "purifier/common/confidence.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/nn/mlp.hpp"
#include "purifier/nn/optimizer.hpp"

namespace purifier::defense {

struct CvaeConfig {
  size_t num_classes = 0;  // k; must equal the confidence width
  std::vector<size_t> encoder_hidden = {32, 64, 128};
  size_t latent_dim = 2;
  std::vector<size_t> decoder_hidden = {128, 64, 32};
  nn::Activation hidden_activation = nn::Activation::kRelu;
  double label_weight = 1.0;  // lambda
  double noise_scale = 0.1;   // sigma of the latent perturbation
  // Weight of 0.5 * |mu|^2 on the encoder means. Zero keeps the objective at
  // reconstruction + lambda * label loss.
  double kl_weight = 0.0;
  nn::OptimizerConfig optimizer;
  size_t epochs = 100;
  size_t batch_size = 64;
  double init_stddev = 0.1;
  uint64_t seed = 0;
};

void ValidateCvaeConfig(const CvaeConfig& config);

enum class NoiseMode { kSample, kZero };

// Encoder: [c | onehot(l)] -> latent mean. Decoder: [z | onehot(l)] -> softmax.
class ConfidenceReformer {
 public:
  ConfidenceReformer() = default;
  ConfidenceReformer(nn::Mlp<float> encoder, nn::Mlp<float> decoder, double noise_scale);

  size_t num_classes() const { return decoder_.output_dim(); }
  size_t latent_dim() const { return encoder_.output_dim(); }
  double noise_scale() const { return noise_scale_; }
  const nn::Mlp<float>& encoder() const { return encoder_; }
  const nn::Mlp<float>& decoder() const { return decoder_; }

  nn::MatrixD EncodeMeans(const nn::MatrixD& confidences, std::span<const int> conditions) const;
  nn::MatrixD Decode(const nn::MatrixD& latent, std::span<const int> conditions) const;

  // Rows are conditioned on their own argmax. In sample mode each row's noise
  // is drawn from a generator seeded by (noise_seed, bytes of the row), so the
  // output is a pure function of the input row.
  nn::MatrixD SampleLatent(const nn::MatrixD& confidences, NoiseMode mode, uint64_t noise_seed) const;
  nn::MatrixD ReformBatch(const nn::MatrixD& confidences, NoiseMode mode, uint64_t noise_seed) const;

 private:
  nn::Mlp<float> encoder_;
  nn::Mlp<float> decoder_;
  nn::Mlp<double> encoder_d_;
  nn::Mlp<double> decoder_d_;
  double noise_scale_ = 0.0;
};

ConfidenceVector Reform(const ConfidenceReformer& reformer, const ConfidenceVector& c, NoiseMode mode,
                        uint64_t noise_seed);

nn::MatrixD OneHot(std::span<const int> labels, size_t num_classes);
std::vector<int> ArgMaxRows(const nn::MatrixD& m);

// Trains on reference confidences (rows on the simplex).
ConfidenceReformer FitReformer(const nn::MatrixD& confidences, const CvaeConfig& config,
                               std::vector<double>* loss_curve = nullptr);

// Queries the target on the reference set and fits the reformer on the result.
ConfidenceReformer TrainReformer(const nn::Mlp<double>& target, const data::Dataset& reference,
                                 const CvaeConfig& config, std::vector<double>* loss_curve = nullptr);

}  // namespace purifier::defense

#endif  // PURIFIER_DEFENSE_REFORMER_HPP_
