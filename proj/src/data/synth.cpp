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
#include "purifier/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "purifier/common/random.hpp"

namespace purifier::data {

std::string_view FeatureModelName(FeatureModel model) {
  return model == FeatureModel::kGaussian ? "gaussian" : "bernoulli";
}

FeatureModel ParseFeatureModel(std::string_view name) {
  if (name == "gaussian") return FeatureModel::kGaussian;
  if (name == "bernoulli") return FeatureModel::kBernoulli;
  Fail(ErrorCode::kInvalidArgument, "unknown feature model '" + std::string(name) + "'");
}

void ValidateSynthSpec(const SynthSpec& spec) {
  Require(spec.num_classes >= 2, ErrorCode::kInvalidArgument, "synth: need at least 2 classes");
  Require(spec.feature_dim >= 2, ErrorCode::kInvalidArgument, "synth: need at least 2 features");
  Require(spec.num_points >= spec.num_classes, ErrorCode::kInvalidArgument,
          "synth: fewer points (" + std::to_string(spec.num_points) + ") than classes (" +
              std::to_string(spec.num_classes) + ")");
  Require(spec.label_noise >= 0.0 && spec.label_noise < 1.0, ErrorCode::kInvalidArgument,
          "synth: label noise must be in [0,1)");
  Require(spec.family_size >= 1, ErrorCode::kInvalidArgument, "synth: family size must be >= 1");
  Require(spec.class_flip_fraction >= 0.0 && spec.class_flip_fraction <= 1.0, ErrorCode::kInvalidArgument,
          "synth: flip fraction must be in [0,1]");
  Require(spec.low_prob >= 0.0 && spec.high_prob <= 1.0 && spec.low_prob <= spec.high_prob,
          ErrorCode::kInvalidArgument, "synth: need 0 <= low_prob <= high_prob <= 1");
  Require(spec.informative_fraction > 0.0 && spec.informative_fraction <= 1.0, ErrorCode::kInvalidArgument,
          "synth: informative fraction must be in (0,1]");
  Require(spec.sibling_separation >= 0.0, ErrorCode::kInvalidArgument, "synth: sibling separation must be >= 0");
  Require(spec.stddev >= 0.0, ErrorCode::kInvalidArgument, "synth: stddev must be >= 0");
  Require(spec.num_sensitive != 1, ErrorCode::kInvalidArgument, "synth: a sensitive attribute needs >= 2 values");
  Require(spec.sensitive_strength >= 0.0 && spec.sensitive_strength <= 1.0, ErrorCode::kInvalidArgument,
          "synth: sensitive strength must be in [0,1]");
}

std::vector<int> SynthesizeComponentIds(const SynthSpec& spec) {
  ValidateSynthSpec(spec);
  std::vector<int> ids(spec.num_points);
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i % spec.num_classes);
  Rng rng(DeriveSeed(spec.seed, "components"));
  Shuffle(ids, rng);
  return ids;
}

namespace {

// Per-class Bernoulli probabilities, families sharing a base pattern.
std::vector<std::vector<double>> BernoulliProfiles(const SynthSpec& spec) {
  Rng rng(DeriveSeed(spec.seed, "profiles"));
  const size_t d = std::max<size_t>(
      1, static_cast<size_t>(std::lround(spec.informative_fraction * static_cast<double>(spec.feature_dim))));
  const double mid = 0.5 * (spec.high_prob + spec.low_prob);
  const size_t families = (spec.num_classes + spec.family_size - 1) / spec.family_size;
  std::vector<std::vector<bool>> bases(families, std::vector<bool>(d));
  for (auto& base : bases) {
    for (size_t j = 0; j < d; ++j) base[j] = (rng() & 1) != 0;
  }
  const size_t flips = static_cast<size_t>(std::lround(spec.class_flip_fraction * static_cast<double>(d)));
  std::vector<std::vector<double>> profiles;
  for (size_t c = 0; c < spec.num_classes; ++c) {
    std::vector<bool> bits = bases[c / spec.family_size];
    const auto order = Permutation(d, rng);
    for (size_t f = 0; f < flips; ++f) bits[order[f]] = !bits[order[f]];
    std::vector<double> profile(spec.feature_dim, mid);
    for (size_t j = 0; j < d; ++j) profile[j] = bits[j] ? spec.high_prob : spec.low_prob;
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

}  // namespace

Dataset Synthesize(const SynthSpec& spec) {
  const std::vector<int> components = SynthesizeComponentIds(spec);
  const size_t n = spec.num_points;
  const size_t d = spec.feature_dim;

  std::vector<int> sensitive;
  std::vector<double> expression(n, 1.0);
  if (spec.num_sensitive >= 2) {
    sensitive.resize(n);
    for (size_t i = 0; i < n; ++i) sensitive[i] = static_cast<int>(i % spec.num_sensitive);
    Rng srng(DeriveSeed(spec.seed, "sensitive"));
    Shuffle(sensitive, srng);
    for (size_t i = 0; i < n; ++i) {
      const double pos = static_cast<double>(sensitive[i]) / static_cast<double>(spec.num_sensitive - 1);
      expression[i] = 1.0 - spec.sensitive_strength * pos;
    }
  }

  nn::MatrixD features(n, d);
  Rng frng(DeriveSeed(spec.seed, "features"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (spec.model == FeatureModel::kGaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const size_t families = (spec.num_classes + spec.family_size - 1) / spec.family_size;
    for (size_t i = 0; i < n; ++i) {
      const size_t c = static_cast<size_t>(components[i]);
      std::vector<double> mean(d, 0.0);
      if (spec.family_size == 1) {
        mean[c % d] = spec.separation;
      } else {
        mean[(c / spec.family_size) % d] += spec.separation;
        mean[(families + c) % d] += spec.sibling_separation;
      }
      for (size_t j = 0; j < d; ++j) features(i, j) = mean[j] * expression[i] + spec.stddev * normal(frng);
    }
  } else {
    const auto profiles = BernoulliProfiles(spec);
    const double mid = 0.5 * (spec.high_prob + spec.low_prob);
    for (size_t i = 0; i < n; ++i) {
      const auto& profile = profiles[static_cast<size_t>(components[i])];
      for (size_t j = 0; j < d; ++j) {
        const double p = mid + expression[i] * (profile[j] - mid);
        features(i, j) = unit(frng) < p ? 1.0 : 0.0;
      }
    }
  }

  std::vector<int> labels = components;
  if (spec.label_noise > 0.0) {
    Rng nrng(DeriveSeed(spec.seed, "label-noise"));
    std::uniform_int_distribution<int> other(1, static_cast<int>(spec.num_classes) - 1);
    for (auto& label : labels) {
      if (unit(nrng) < spec.label_noise) {
        label = (label + other(nrng)) % static_cast<int>(spec.num_classes);
      }
    }
  }
  return Dataset(spec.name, std::move(features), std::move(labels), std::move(sensitive), spec.num_classes,
                 spec.num_sensitive >= 2 ? spec.num_sensitive : 0);
}

}  // namespace purifier::data
