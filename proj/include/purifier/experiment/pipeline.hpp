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
#ifndef PURIFIER_EXPERIMENT_PIPELINE_HPP_
#define PURIFIER_EXPERIMENT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "purifier/attacks/oracle.hpp"
#include "purifier/data/dataset.hpp"
#include "purifier/data/split.hpp"
#include "purifier/experiment/config.hpp"

namespace purifier::experiment {

// Artifact paths under one experiment directory. File names carry the seed.
class Layout {
 public:
  Layout(std::filesystem::path root, uint64_t seed) : root_(std::move(root)), seed_(seed) {}
  explicit Layout(const ExperimentConfig& config) : Layout(config.output_dir, config.seed) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path config() const { return root_ / Named("config", ".json"); }
  std::filesystem::path dataset() const { return root_ / "data" / Named("dataset", ".csv"); }
  std::filesystem::path split() const { return root_ / "data" / Named("split", ".json"); }
  std::filesystem::path target_model() const { return root_ / "target" / Named("model", ".prfm"); }
  std::filesystem::path target_report() const { return root_ / "target" / Named("train_report", ".json"); }
  std::filesystem::path purifier_dir() const { return root_ / "purifier" / Named("bundle", ""); }
  std::filesystem::path purifier_timings() const { return root_ / "purifier" / Named("timings", ".json"); }
  std::filesystem::path attack_result(attacks::Arm arm, const std::string& attack) const {
    return root_ / std::string(attacks::ArmName(arm)) / Named(attack, ".json");
  }
  std::filesystem::path report_json() const { return root_ / Named("report", ".json"); }
  std::filesystem::path report_csv() const { return root_ / Named("report", ".csv"); }
  std::filesystem::path latent_original() const { return root_ / Named("latent_original", ".csv"); }
  std::filesystem::path latent_purified() const { return root_ / Named("latent_purified", ".csv"); }
  std::filesystem::path timings() const { return root_ / Named("timings", ".json"); }

 private:
  std::string Named(const std::string& stem, const std::string& ext) const {
    return stem + "_seed" + std::to_string(seed_) + ext;
  }
  std::filesystem::path root_;
  uint64_t seed_;
};

struct RunOptions {
  bool force = false;  // rewrite outputs that already exist
  size_t threads = 1;  // concurrent attacks
};

enum class StageStatus { kWritten, kUpToDate };

StageStatus RunSynth(const ExperimentConfig& config, const RunOptions& options = {});
StageStatus RunTrainTarget(const ExperimentConfig& config, const RunOptions& options = {});
StageStatus RunTrainPurifier(const ExperimentConfig& config, const RunOptions& options = {});
StageStatus RunAttack(const ExperimentConfig& config, const std::string& attack, attacks::Arm arm,
                      const RunOptions& options = {});
// Every configured attack against arm; options.threads of them at a time.
void RunAttacks(const ExperimentConfig& config, attacks::Arm arm, const RunOptions& options = {});
StageStatus RunReport(const ExperimentConfig& config, const RunOptions& options = {});

// synth, train-target, train-purifier (when a defended arm is configured),
// every attack on every arm, report.
void RunAll(const ExperimentConfig& config, const RunOptions& options = {});

// Loaders for stage outputs; a missing file is kMissingArtifact.
data::Dataset LoadPool(const ExperimentConfig& config);
data::SplitIndices LoadSplit(const ExperimentConfig& config);

}  // namespace purifier::experiment

#endif  // PURIFIER_EXPERIMENT_PIPELINE_HPP_
