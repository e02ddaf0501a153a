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
#ifndef PURIFIER_EXPERIMENT_CONFIG_HPP_
#define PURIFIER_EXPERIMENT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "purifier/attacks/attacks.hpp"
#include "purifier/attacks/oracle.hpp"
#include "purifier/classifier/target.hpp"
#include "purifier/data/csv.hpp"
#include "purifier/data/split.hpp"
#include "purifier/data/synth.hpp"
#include "purifier/defense/bundle.hpp"

namespace purifier::experiment {

// Attack names accepted in "attacks.run".
inline const std::vector<std::string> kMembershipAttacks = {"nsh", "mlleaks", "adaptive", "blindmi", "gap",
                                                            "transfer"};
inline const std::vector<std::string> kAllAttacks = {"nsh",      "mlleaks",   "adaptive",  "blindmi", "gap",
                                                     "transfer", "inversion", "attribute", "boundary"};

bool IsMembershipAttack(const std::string& name);

struct ExperimentConfig {
  std::string name = "desk";
  uint64_t seed = 1;
  std::filesystem::path output_dir = "runs/desk";

  // Exactly one source: a synthetic spec or a CSV file.
  std::optional<data::SynthSpec> synth;
  std::optional<std::filesystem::path> csv_path;
  data::CsvSchema csv_schema;

  data::SplitPlan split;
  classifier::ClassifierConfig target;
  defense::PurifierConfig purifier;
  attacks::AttackSettings attack;
  std::vector<std::string> attacks;
  std::vector<attacks::Arm> arms;
  size_t histogram_bins = 20;
};

// Purchase-like desk task: 20 Gaussian clusters in 64 dims, 6000 points.
ExperimentConfig DeskConfig();

// Same recipe on a task whose features reveal a 5-valued sensitive attribute.
ExperimentConfig DeskAttributeConfig();

// Keys present in json override base; unknown keys are errors (kConfig).
ExperimentConfig ParseConfig(const std::string& json, const ExperimentConfig& base = DeskConfig());
ExperimentConfig LoadConfig(const std::filesystem::path& path, const ExperimentConfig& base = DeskConfig());
std::string ConfigJson(const ExperimentConfig& config);

// Every seeded component follows config.seed.
ExperimentConfig WithSeed(ExperimentConfig config, uint64_t seed);

void ValidateConfig(const ExperimentConfig& config);

}  // namespace purifier::experiment

#endif  // PURIFIER_EXPERIMENT_CONFIG_HPP_
