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
#ifndef PURIFIER_DATA_SYNTH_HPP_
#define PURIFIER_DATA_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "purifier/data/dataset.hpp"

namespace purifier::data {

enum class FeatureModel { kGaussian, kBernoulli };

std::string_view FeatureModelName(FeatureModel model);
FeatureModel ParseFeatureModel(std::string_view name);

struct SynthSpec {
  std::string name = "synthetic";
  size_t num_points = 100;
  size_t num_classes = 2;
  size_t feature_dim = 2;
  FeatureModel model = FeatureModel::kGaussian;

  // Gaussian clusters: class c is centred at separation * e_(c mod d). With
  // family_size > 1 the centre is separation * e_(family) plus
  // sibling_separation * e_(families + c), indices mod d.
  double separation = 1.0;
  double stddev = 0.1;
  double sibling_separation = 0.0;

  // Bernoulli profiles. Classes are grouped into families of family_size that
  // share a base profile; each class then flips class_flip_fraction of the
  // features. A profile entry is high_prob or low_prob.
  size_t family_size = 1;
  double class_flip_fraction = 0.25;
  double high_prob = 0.8;
  double low_prob = 0.1;
  // Only the leading round(informative_fraction * d) features follow the
  // profiles; the rest are drawn at (high_prob + low_prob) / 2 for every class.
  double informative_fraction = 1.0;

  // Fraction of points whose label is replaced by a different random class.
  double label_noise = 0.0;

  // Optional sensitive attribute with num_sensitive balanced values. Each
  // value scales how strongly the features express the label
  // (sensitive_strength spreads the scales apart; 0 makes it independent).
  size_t num_sensitive = 0;
  double sensitive_strength = 0.0;

  uint64_t seed = 0;
};

void ValidateSynthSpec(const SynthSpec& spec);

// Deterministic per seed; generator component ids are balanced within +-1.
Dataset Synthesize(const SynthSpec& spec);

// Component id of every point before label noise (for audits).
std::vector<int> SynthesizeComponentIds(const SynthSpec& spec);

}  // namespace purifier::data

#endif  // PURIFIER_DATA_SYNTH_HPP_
