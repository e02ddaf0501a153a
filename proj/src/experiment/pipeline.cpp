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
#include "purifier/experiment/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "purifier/attacks/attacks.hpp"
#include "purifier/classifier/target.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/io.hpp"
#include "purifier/data/csv.hpp"
#include "purifier/data/synth.hpp"
#include "purifier/defense/bundle.hpp"
#include "purifier/eval/diagnostics.hpp"
#include "purifier/eval/report.hpp"
#include "purifier/nn/model_io.hpp"

namespace purifier::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

void Need(const fs::path& path, const std::string& producer) {
  Require(fs::exists(path), ErrorCode::kMissingArtifact,
          "missing artifact " + path.string() + " (run '" + producer + "' first)");
}

bool Skip(const fs::path& path, const RunOptions& options) { return !options.force && fs::exists(path); }

void Write(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  WriteFileAtomic(path, contents);
}

json ReadJson(const fs::path& path) {
  try {
    return json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

data::CsvSchema PoolSchema(const ExperimentConfig& config) {
  if (!config.synth) return config.csv_schema;
  data::CsvSchema schema;
  schema.num_classes = config.synth->num_classes;
  if (config.synth->num_sensitive >= 2) {
    schema.sensitive_column = "sensitive";
    schema.num_sensitive = config.synth->num_sensitive;
  }
  return schema;
}

nn::Mlp<double> LoadTarget(const Layout& layout) {
  Need(layout.target_model(), "train-target");
  return nn::LoadModel(layout.target_model()).Cast<double>();
}

defense::PurifierBundle LoadPurifier(const Layout& layout) {
  Need(layout.purifier_dir() / "bundle.json", "train-purifier");
  return defense::LoadBundle(layout.purifier_dir());
}

std::vector<size_t> Concat(std::vector<size_t> a, const std::vector<size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<int> LabelsOf(const data::Dataset& pool, const std::vector<size_t>& rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = pool.labels()[rows[i]];
  return out;
}

// Everything an attack or the report needs for one arm.
struct ArmView {
  data::Dataset pool;
  data::SplitIndices split;
  nn::Mlp<double> target;
  std::optional<attacks::TargetOracle> oracle;
};

ArmView OpenArm(const ExperimentConfig& config, attacks::Arm arm) {
  const Layout layout(config);
  ArmView view{LoadPool(config), LoadSplit(config), LoadTarget(layout), std::nullopt};
  if (arm == attacks::Arm::kNone) {
    view.oracle.emplace(view.target);
  } else {
    view.oracle.emplace(attacks::TargetOracle::ForArm(view.target, LoadPurifier(layout), arm));
  }
  Require(view.oracle->num_classes() == view.pool.num_classes(), ErrorCode::kDimensionMismatch,
          "target has " + std::to_string(view.oracle->num_classes()) + " outputs but the dataset has " +
              std::to_string(view.pool.num_classes()) + " classes");
  Require(view.target.input_dim() == view.pool.feature_dim(), ErrorCode::kDimensionMismatch,
          "target expects " + std::to_string(view.target.input_dim()) + " features but the dataset has " +
              std::to_string(view.pool.feature_dim()));
  return view;
}

std::string MembershipJson(const attacks::MembershipAttackResult& r) { return attacks::AttackResultJson(r); }

std::optional<json> MaybeJson(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  return ReadJson(path);
}

}  // namespace

data::Dataset LoadPool(const ExperimentConfig& config) {
  const Layout layout(config);
  Need(layout.dataset(), "synth");
  return data::LoadCsv(layout.dataset(), PoolSchema(config));
}

data::SplitIndices LoadSplit(const ExperimentConfig& config) {
  const Layout layout(config);
  Need(layout.split(), "synth");
  return data::ParseSplitManifest(ReadFile(layout.split()));
}

StageStatus RunSynth(const ExperimentConfig& config, const RunOptions& options) {
  ValidateConfig(config);
  const Layout layout(config);
  if (Skip(layout.dataset(), options) && Skip(layout.split(), options)) return StageStatus::kUpToDate;
  data::Dataset pool;
  if (config.synth) {
    pool = data::Synthesize(*config.synth);
  } else {
    Need(*config.csv_path, "a dataset export");
    pool = data::LoadCsv(*config.csv_path, config.csv_schema);
  }
  const auto split = data::Split(pool.size(), config.split);
  Write(layout.config(), ConfigJson(config));
  Write(layout.dataset(), data::FormatCsv(pool));
  Write(layout.split(), data::SplitManifestJson(split));
  return StageStatus::kWritten;
}

StageStatus RunTrainTarget(const ExperimentConfig& config, const RunOptions& options) {
  const Layout layout(config);
  if (Skip(layout.target_model(), options)) return StageStatus::kUpToDate;
  const auto pool = LoadPool(config);
  const auto split = LoadSplit(config);
  const auto trained = classifier::TrainTarget(config.target, pool.Subset(split.d1, "d1"), pool.Subset(split.d3, "d3"));
  Write(layout.target_report(), classifier::TrainReportJson(trained.report));
  fs::create_directories(layout.target_model().parent_path());
  nn::SaveModel(layout.target_model(), trained.model);
  return StageStatus::kWritten;
}

StageStatus RunTrainPurifier(const ExperimentConfig& config, const RunOptions& options) {
  const Layout layout(config);
  if (Skip(layout.purifier_dir() / "bundle.json", options)) return StageStatus::kUpToDate;
  const auto pool = LoadPool(config);
  const auto split = LoadSplit(config);
  const auto target = LoadTarget(layout);
  Need(layout.target_report(), "train-target");
  const auto report = ReadJson(layout.target_report());
  const double acc_train = report.at("acc_train").get<double>();
  const double acc_test = report.at("acc_test").get<double>();

  auto purifier_config = config.purifier;
  purifier_config.cvae.num_classes = pool.num_classes();
  const auto d1 = pool.Subset(split.d1, "d1");
  const auto d3 = pool.Subset(split.d3, "d3");
  auto start = Clock::now();
  const auto bundle =
      defense::TrainPurifier(target, d1, pool.Subset(split.d2, "d2"), acc_train, acc_test, purifier_config);
  eval::Timings defense_time{Since(start), 0.0};

  start = Clock::now();
  (void)classifier::PredictConfidences(target, d3.features());
  eval::Timings target_time{report.value("train_seconds", 0.0), Since(start)};
  start = Clock::now();
  (void)defense::PurifyBatch(bundle, target, d3.features());
  defense_time.test_seconds = Since(start);

  // Saved beside the final location and renamed, so readers never see half a bundle.
  const fs::path staging = layout.purifier_dir().string() + ".tmp";
  fs::remove_all(staging);
  fs::create_directories(staging);
  defense::SaveBundle(staging, bundle);
  fs::remove_all(layout.purifier_dir());
  fs::rename(staging, layout.purifier_dir());
  ordered_json t;
  t["target"] = {{"train_seconds", target_time.train_seconds}, {"test_seconds", target_time.test_seconds}};
  t["defense"] = {{"train_seconds", defense_time.train_seconds}, {"test_seconds", defense_time.test_seconds}};
  Write(layout.purifier_timings(), t.dump(2) + "\n");
  return StageStatus::kWritten;
}

StageStatus RunAttack(const ExperimentConfig& config, const std::string& attack, attacks::Arm arm,
                      const RunOptions& options) {
  Require(std::find(kAllAttacks.begin(), kAllAttacks.end(), attack) != kAllAttacks.end(), ErrorCode::kConfig,
          "unknown attack '" + attack + "'");
  const Layout layout(config);
  const auto out = layout.attack_result(arm, attack);
  if (Skip(out, options)) return StageStatus::kUpToDate;
  if (attack == "boundary") {
    Write(out, attacks::BoundaryAttackStubJson(std::string(attacks::ArmName(arm)), config.seed));
    return StageStatus::kWritten;
  }
  auto view = OpenArm(config, arm);
  attacks::AttackContext ctx;
  ctx.oracle = &*view.oracle;
  ctx.pool = &view.pool;
  ctx.aux_members = view.split.attacker_members;
  ctx.aux_nonmembers = view.split.attacker_nonmembers;
  ctx.eval_members = view.split.held_out_members();
  ctx.eval_nonmembers = view.split.held_out_nonmembers();
  ctx.target_arm = std::string(attacks::ArmName(arm));
  ctx.seed = config.seed;
  ctx.settings = config.attack;

  const auto start = Clock::now();
  std::string result;
  if (attack == "nsh") {
    result = MembershipJson(attacks::NshAttack(ctx));
  } else if (attack == "mlleaks") {
    result = MembershipJson(attacks::MlleaksAttack(ctx));
  } else if (attack == "adaptive") {
    attacks::DefenseRecipe recipe;
    if (arm != attacks::Arm::kNone) {
      recipe.purifier = config.purifier;
      recipe.purifier->cvae.num_classes = view.pool.num_classes();
      recipe.purifier->flags = attacks::ArmFlags(arm);
      recipe.reference_rows = view.split.d2;
    }
    result = MembershipJson(attacks::AdaptiveAttack(ctx, recipe));
  } else if (attack == "blindmi") {
    result = MembershipJson(attacks::BlindMiAttack(ctx));
  } else if (attack == "gap") {
    result = MembershipJson(attacks::GapAttack(ctx));
  } else if (attack == "transfer") {
    result = MembershipJson(attacks::TransferAttack(ctx));
  } else if (attack == "inversion") {
    const auto r = attacks::InversionAttack(ctx, Concat(Concat(view.split.d1, view.split.d2), view.split.d3));
    ordered_json j;
    j["attack"] = "inversion";
    j["target_arm"] = ctx.target_arm;
    j["error"] = r.error;
    j["train_rows"] = r.train_rows;
    j["test_rows"] = r.test_rows;
    j["seed"] = config.seed;
    j["wall_clock"] = Since(start);
    result = j.dump(2) + "\n";
  } else {
    const auto r = attacks::AttributeAttack(ctx);
    ordered_json j;
    j["attack"] = "attribute";
    j["target_arm"] = ctx.target_arm;
    j["accuracy"] = r.accuracy;
    j["num_sensitive"] = r.num_sensitive;
    j["chance"] = 1.0 / static_cast<double>(r.num_sensitive);
    j["seed"] = config.seed;
    j["wall_clock"] = Since(start);
    result = j.dump(2) + "\n";
  }
  Write(out, result);
  return StageStatus::kWritten;
}

void RunAttacks(const ExperimentConfig& config, attacks::Arm arm, const RunOptions& options) {
  const auto& names = config.attacks;
  const size_t workers = std::clamp<size_t>(options.threads, 1, std::max<size_t>(names.size(), 1));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  const auto work = [&] {
    for (size_t i = next++; i < names.size(); i = next++) {
      try {
        RunAttack(config, names[i], arm, options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

StageStatus RunReport(const ExperimentConfig& config, const RunOptions& options) {
  const Layout layout(config);
  if (Skip(layout.report_json(), options) && Skip(layout.report_csv(), options)) return StageStatus::kUpToDate;
  const auto pool = LoadPool(config);
  const auto split = LoadSplit(config);
  const auto target = LoadTarget(layout);
  bool defended = false;
  for (auto arm : config.arms) defended = defended || arm != attacks::Arm::kNone;
  std::optional<defense::PurifierBundle> bundle;
  if (defended) bundle = LoadPurifier(layout);

  const auto d1x = nn::SelectRows(pool.features(), split.d1);
  const auto d3x = nn::SelectRows(pool.features(), split.d3);
  const auto d1y = LabelsOf(pool, split.d1);
  const auto d3y = LabelsOf(pool, split.d3);

  std::vector<std::string> membership;
  for (const auto& a : config.attacks) {
    if (IsMembershipAttack(a)) membership.push_back(a);
  }
  std::vector<std::string> arm_names;
  std::vector<eval::ArmReport> arms;
  for (auto arm : config.arms) {
    const auto oracle = arm == attacks::Arm::kNone ? attacks::TargetOracle(target)
                                                   : attacks::TargetOracle::ForArm(target, *bundle, arm);
    eval::ArmReport r;
    r.arm = std::string(attacks::ArmName(arm));
    arm_names.push_back(r.arm);
    const auto c1 = oracle.Query(d1x);
    const auto c3 = oracle.Query(d3x);
    r.acc_train = classifier::Accuracy(c1, d1y);
    r.acc_test = classifier::Accuracy(c3, d3y);
    r.gap_stats = eval::ComputeGapStats(c1, d1y, c3, d3y, config.histogram_bins);
    for (const auto& a : membership) {
      if (const auto j = MaybeJson(layout.attack_result(arm, a))) {
        r.attacks[a] = {j->at("accuracy").get<double>(), j->at("auc").get<double>(), j->at("threshold").get<double>()};
      }
    }
    if (const auto j = MaybeJson(layout.attack_result(arm, "inversion"))) r.inversion_error = j->at("error").get<double>();
    if (const auto j = MaybeJson(layout.attack_result(arm, "attribute"))) {
      r.attribute_accuracy = j->at("accuracy").get<double>();
    }
    arms.push_back(std::move(r));
  }
  auto report = eval::AssembleReport(config.seed, arm_names, membership, arms);

  if (bundle) {
    // Members of D1 and non-members of D3 in the reformer's latent space,
    // before (encoder means) and after (noisy latents) purification.
    const auto conf = classifier::PredictConfidences(target, nn::SelectRows(pool.features(), Concat(split.d1, split.d3)));
    std::vector<int> labels = d1y;
    labels.insert(labels.end(), d3y.begin(), d3y.end());
    std::vector<int> is_member(split.d1.size(), 1);
    is_member.resize(labels.size(), 0);
    const auto original =
        eval::LatentScatter(bundle->reformer, conf, labels, is_member, defense::NoiseMode::kZero, bundle->noise_seed);
    const auto purified =
        eval::LatentScatter(bundle->reformer, conf, labels, is_member, defense::NoiseMode::kSample, bundle->noise_seed);
    const double before = eval::MemberDispersion(original);
    if (before > 0.0) report.latent_dispersion_ratio = eval::MemberDispersion(purified) / before;
    report.latent_scatter = layout.latent_purified().filename().string();
    Write(layout.latent_original(), eval::LatentScatterCsv(original));
    Write(layout.latent_purified(), eval::LatentScatterCsv(purified));

    if (fs::exists(layout.purifier_timings())) {
      const auto t = ReadJson(layout.purifier_timings());
      const eval::Timings target_time{t.at("target").at("train_seconds").get<double>(),
                                      t.at("target").at("test_seconds").get<double>()};
      const eval::Timings defense_time{t.at("defense").at("train_seconds").get<double>(),
                                       t.at("defense").at("test_seconds").get<double>()};
      if (target_time.train_seconds > 0.0 && target_time.test_seconds > 0.0) {
        Write(layout.timings(), eval::TimingsJson(target_time, defense_time));
      }
    }
  }
  Write(layout.report_json(), eval::ReportJson(report));
  Write(layout.report_csv(), eval::ReportCsv(report));
  return StageStatus::kWritten;
}

void RunAll(const ExperimentConfig& config, const RunOptions& options) {
  RunSynth(config, options);
  RunTrainTarget(config, options);
  bool defended = false;
  for (auto arm : config.arms) defended = defended || arm != attacks::Arm::kNone;
  if (defended) RunTrainPurifier(config, options);
  for (auto arm : config.arms) RunAttacks(config, arm, options);
  RunReport(config, options);
}

}  // namespace purifier::experiment
