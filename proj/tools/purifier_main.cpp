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
// Command line runner for the experiment stages.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "purifier/attacks/oracle.hpp"
#include "purifier/common/error.hpp"
#include "purifier/experiment/config.hpp"
#include "purifier/experiment/pipeline.hpp"

namespace {

using purifier::Error;
using purifier::ErrorCode;
namespace ex = purifier::experiment;

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;
constexpr const char* kThreadsEnv = "PURIFIER_THREADS";

int ExitCodeFor(ErrorCode code) { return 10 + static_cast<int>(code); }

int ReportError(const std::string& code, int exit_code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"code", code}, {"exit_code", exit_code}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return exit_code;
}

size_t ThreadsFromEnv() {
  const char* raw = std::getenv(kThreadsEnv);
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  purifier::Require(end != raw && *end == '\0' && v >= 1, ErrorCode::kConfig,
                    std::string(kThreadsEnv) + " must be a positive integer");
  return static_cast<size_t>(v);
}

void Announce(const std::string& what, ex::StageStatus status) {
  std::cout << what << ": " << (status == ex::StageStatus::kWritten ? "written" : "up to date") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train, defend and attack a target classifier; write metrics and diagnostics."};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset = "desk";
  std::optional<uint64_t> seed_override;
  std::string out_dir;
  std::string arm_name;
  std::string attack_name = "all";
  bool force = false;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config (JSON); keys it omits come from --preset");
    cmd->add_option("--preset", preset, "Built-in base config")
        ->check(CLI::IsMember({"desk", "desk-attribute"}));
    cmd->add_option("--seed-override", seed_override, "Replace the config seed");
    cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    cmd->add_flag("--force", force, "Rewrite outputs that already exist");
  };
  auto* synth = app.add_subcommand("synth", "Generate (or import) the dataset and the split");
  auto* train_target = app.add_subcommand("train-target", "Train the target classifier on D1");
  auto* train_purifier = app.add_subcommand("train-purifier", "Train the reformer on D2 and index the swap set");
  auto* attack = app.add_subcommand("attack", "Run attacks against one arm");
  auto* report = app.add_subcommand("report", "Assemble the report from finished attacks");
  auto* run = app.add_subcommand("run", "All stages, every configured arm and attack");
  auto* show = app.add_subcommand("show-config", "Print the resolved config");
  for (auto* cmd : {synth, train_target, train_purifier, attack, report, run, show}) common(cmd);
  attack->add_option("--arm", arm_name, "none, reformer or full")->required();
  attack->add_option("--attack", attack_name,
                     "nsh, mlleaks, adaptive, blindmi, gap, transfer, inversion, attribute, boundary or all");
  train_purifier->add_option("--arm", arm_name, "Accepted for symmetry; one bundle serves every arm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage_error", kExitUsage, e.what());
  }

  try {
    const auto base = preset == "desk" ? ex::DeskConfig() : ex::DeskAttributeConfig();
    auto config = config_path.empty() ? base : ex::LoadConfig(config_path, base);
    if (seed_override) config = ex::WithSeed(config, *seed_override);
    if (!out_dir.empty()) config.output_dir = out_dir;
    ex::ValidateConfig(config);
    ex::RunOptions options;
    options.force = force;
    options.threads = ThreadsFromEnv();

    if (show->parsed()) {
      std::cout << ex::ConfigJson(config);
    } else if (synth->parsed()) {
      Announce("synth", ex::RunSynth(config, options));
    } else if (train_target->parsed()) {
      Announce("train-target", ex::RunTrainTarget(config, options));
    } else if (train_purifier->parsed()) {
      if (!arm_name.empty()) purifier::attacks::ParseArm(arm_name);
      Announce("train-purifier", ex::RunTrainPurifier(config, options));
    } else if (attack->parsed()) {
      const auto arm = purifier::attacks::ParseArm(arm_name);
      if (attack_name == "all") {
        ex::RunAttacks(config, arm, options);
        std::cout << "attack " << arm_name << ": done\n";
      } else {
        Announce("attack " + attack_name + " on " + arm_name, ex::RunAttack(config, attack_name, arm, options));
      }
    } else if (report->parsed()) {
      Announce("report", ex::RunReport(config, options));
    } else if (run->parsed()) {
      ex::RunAll(config, options);
      std::cout << "run: done (" << ex::Layout(config).report_json().string() << ")\n";
    }
  } catch (const Error& e) {
    return ReportError(std::string(purifier::ErrorCodeName(e.code())), ExitCodeFor(e.code()), e.what());
  } catch (const std::exception& e) {
    return ReportError("internal_error", kExitInternal, e.what());
  }
  return 0;
}
