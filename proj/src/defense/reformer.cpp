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
#include "purifier/defense/reformer.hpp"

#include <cmath>
#include <random>
#include <string>

#include "purifier/classifier/target.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/random.hpp"
#include "purifier/nn/loss.hpp"

namespace purifier::defense {

void ValidateCvaeConfig(const CvaeConfig& config) {
  Require(config.num_classes >= 2, ErrorCode::kConfig, "reformer needs num_classes >= 2");
  Require(config.latent_dim >= 1, ErrorCode::kConfig, "latent_dim must be >= 1");
  Require(config.epochs >= 1, ErrorCode::kConfig, "reformer epochs must be >= 1");
  Require(config.batch_size >= 1, ErrorCode::kConfig, "reformer batch_size must be >= 1");
  Require(config.label_weight >= 0.0 && config.noise_scale >= 0.0 && config.kl_weight >= 0.0, ErrorCode::kConfig,
          "lambda, sigma and kl_weight must be non-negative");
}

nn::MatrixD OneHot(std::span<const int> labels, size_t num_classes) {
  nn::MatrixD out(labels.size(), num_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    Require(labels[i] >= 0 && static_cast<size_t>(labels[i]) < num_classes, ErrorCode::kInvalidArgument,
            "condition label out of range");
    out(i, static_cast<size_t>(labels[i])) = 1.0;
  }
  return out;
}

std::vector<int> ArgMaxRows(const nn::MatrixD& m) {
  std::vector<int> out(m.rows());
  for (size_t r = 0; r < m.rows(); ++r) out[r] = static_cast<int>(nn::ArgMax(m.row(r)));
  return out;
}

ConfidenceReformer::ConfidenceReformer(nn::Mlp<float> encoder, nn::Mlp<float> decoder, double noise_scale)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)), noise_scale_(noise_scale) {
  const size_t k = decoder_.output_dim();
  Require(decoder_.layers().back().spec.activation == nn::Activation::kSoftmax, ErrorCode::kFormat,
          "decoder head must be softmax");
  Require(encoder_.input_dim() == 2 * k, ErrorCode::kDimensionMismatch,
          "encoder input must be 2k = " + std::to_string(2 * k));
  Require(decoder_.input_dim() == encoder_.output_dim() + k, ErrorCode::kDimensionMismatch,
          "decoder input must be latent + k");
  Require(noise_scale_ >= 0.0 && std::isfinite(noise_scale_), ErrorCode::kInvalidArgument, "bad noise scale");
  encoder_d_ = encoder_.Cast<double>();
  decoder_d_ = decoder_.Cast<double>();
}

nn::MatrixD ConfidenceReformer::EncodeMeans(const nn::MatrixD& confidences, std::span<const int> conditions) const {
  Require(confidences.cols() == num_classes(), ErrorCode::kDimensionMismatch,
          "confidence width " + std::to_string(confidences.cols()) + " != k = " + std::to_string(num_classes()));
  return nn::Predict(encoder_d_, nn::ConcatCols(confidences, OneHot(conditions, num_classes())));
}

nn::MatrixD ConfidenceReformer::Decode(const nn::MatrixD& latent, std::span<const int> conditions) const {
  Require(latent.cols() == latent_dim(), ErrorCode::kDimensionMismatch, "latent width mismatch");
  return nn::Predict(decoder_d_, nn::ConcatCols(latent, OneHot(conditions, num_classes())));
}

nn::MatrixD ConfidenceReformer::SampleLatent(const nn::MatrixD& confidences, NoiseMode mode,
                                             uint64_t noise_seed) const {
  for (size_t r = 0; r < confidences.rows(); ++r) {
    Require(IsOnSimplex(confidences.row(r)), ErrorCode::kInvalidArgument,
            "reform input row " + std::to_string(r) + " is not on the simplex");
  }
  auto z = EncodeMeans(confidences, ArgMaxRows(confidences));
  if (mode == NoiseMode::kSample && noise_scale_ > 0.0) {
    for (size_t r = 0; r < z.rows(); ++r) {
      Rng rng(MixSeed(HashValues(confidences.row(r), MixSeed(noise_seed))));
      std::normal_distribution<double> normal(0.0, noise_scale_);
      for (double& v : z.row(r)) v += normal(rng);
    }
  }
  return z;
}

nn::MatrixD ConfidenceReformer::ReformBatch(const nn::MatrixD& confidences, NoiseMode mode,
                                            uint64_t noise_seed) const {
  return Decode(SampleLatent(confidences, mode, noise_seed), ArgMaxRows(confidences));
}

ConfidenceVector Reform(const ConfidenceReformer& reformer, const ConfidenceVector& c, NoiseMode mode,
                        uint64_t noise_seed) {
  nn::MatrixD batch(1, c.size(), std::vector<double>(c.probs().begin(), c.probs().end()));
  return RowConfidence(reformer.ReformBatch(batch, mode, noise_seed), 0);
}

ConfidenceReformer FitReformer(const nn::MatrixD& confidences, const CvaeConfig& config,
                               std::vector<double>* loss_curve) {
  ValidateCvaeConfig(config);
  const size_t k = config.num_classes;
  Require(confidences.cols() == k, ErrorCode::kDimensionMismatch,
          "condition dim k = " + std::to_string(k) + " but confidences have " + std::to_string(confidences.cols()) +
              " columns");
  Require(confidences.rows() > 0, ErrorCode::kInvalidArgument, "empty reference set");
  for (size_t r = 0; r < confidences.rows(); ++r) {
    Require(IsOnSimplex(confidences.row(r)), ErrorCode::kInvalidArgument, "reference confidence off the simplex");
  }

  std::vector<size_t> enc_sizes{2 * k};
  enc_sizes.insert(enc_sizes.end(), config.encoder_hidden.begin(), config.encoder_hidden.end());
  enc_sizes.push_back(config.latent_dim);
  std::vector<size_t> dec_sizes{config.latent_dim + k};
  dec_sizes.insert(dec_sizes.end(), config.decoder_hidden.begin(), config.decoder_hidden.end());
  dec_sizes.push_back(k);
  auto encoder = nn::Mlp<float>::Initialize(
      nn::ChainSpecs(enc_sizes, config.hidden_activation, nn::Activation::kIdentity),
      DeriveSeed(config.seed, "encoder-init"), config.init_stddev);
  auto decoder = nn::Mlp<float>::Initialize(
      nn::ChainSpecs(dec_sizes, config.hidden_activation, nn::Activation::kSoftmax),
      DeriveSeed(config.seed, "decoder-init"), config.init_stddev);
  nn::Optimizer<float> enc_opt(config.optimizer, encoder);
  nn::Optimizer<float> dec_opt(config.optimizer, decoder);

  const auto conditions = ArgMaxRows(confidences);
  const nn::MatrixF inputs = confidences.Cast<float>();
  const nn::MatrixF onehot = OneHot(conditions, k).Cast<float>();
  const size_t n = confidences.rows();
  const size_t latent = config.latent_dim;

  Rng shuffle_rng(DeriveSeed(config.seed, "reformer-shuffle"));
  Rng noise_rng(DeriveSeed(config.seed, "reformer-noise"));
  std::normal_distribution<float> normal(0.0f, 1.0f);
  const float sigma = static_cast<float>(config.noise_scale);
  const float kl = static_cast<float>(config.kl_weight);

  std::vector<double> curve;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = Permutation(n, shuffle_rng);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < n; start += config.batch_size) {
      const size_t end = std::min(n, start + config.batch_size);
      const std::vector<size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
      const size_t m = rows.size();
      const auto c = nn::SelectRows(inputs, rows);
      const auto cond = nn::SelectRows(onehot, rows);
      std::vector<int> labels(m);
      for (size_t i = 0; i < m; ++i) labels[i] = conditions[rows[i]];

      const auto enc_acts = nn::Forward(encoder, nn::ConcatCols(c, cond));
      const auto& mu = enc_acts.back();
      nn::MatrixF z = mu;
      if (sigma > 0.0f) {
        for (float& v : z.values()) v += sigma * normal(noise_rng);
      }
      const auto dec_acts = nn::Forward(decoder, nn::ConcatCols(z, cond));
      const nn::LossTargets<float> targets{&c, labels, config.label_weight};
      auto eval = nn::EvaluateLoss(nn::LossKind::kComposite, nn::Activation::kSoftmax, dec_acts.back(), targets);
      auto dec_grad = nn::Backward(decoder, dec_acts, std::move(eval.preact_grad), true);
      auto mu_grad = nn::SliceCols(dec_grad.input_grad, 0, latent);
      double penalty = 0.0;
      if (kl > 0.0f) {
        const float scale = kl / static_cast<float>(m);
        for (size_t i = 0; i < mu.size(); ++i) {
          penalty += 0.5 * static_cast<double>(mu.values()[i]) * mu.values()[i];
          mu_grad.values()[i] += scale * mu.values()[i];
        }
        penalty *= config.kl_weight / static_cast<double>(m);
      }
      const auto enc_grad = nn::Backward(encoder, enc_acts, std::move(mu_grad), false);
      dec_opt.Step(decoder, dec_grad.params);
      enc_opt.Step(encoder, enc_grad.params);
      epoch_loss += (eval.value + penalty) * static_cast<double>(m);
    }
    epoch_loss /= static_cast<double>(n);
    Require(std::isfinite(epoch_loss), ErrorCode::kNonFinite, "reformer loss diverged");
    curve.push_back(epoch_loss);
  }
  if (loss_curve != nullptr) *loss_curve = std::move(curve);
  return ConfidenceReformer(std::move(encoder), std::move(decoder), config.noise_scale);
}

ConfidenceReformer TrainReformer(const nn::Mlp<double>& target, const data::Dataset& reference,
                                 const CvaeConfig& config, std::vector<double>* loss_curve) {
  return FitReformer(classifier::PredictConfidences(target, reference.features()), config, loss_curve);
}

}  // namespace purifier::defense
