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
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

const fs::path kWork = PURIFIER_CLI_WORKDIR;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI; returns its exit status and leaves stderr in `err`.
int Cli(const std::string& args, std::string* err = nullptr, const std::string& env = "") {
  const fs::path err_path = kWork / "stderr.txt";
  const std::string cmd = env + " \"" + std::string(PURIFIER_CLI) + "\" " + args + " >/dev/null 2>\"" +
                          err_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  if (err) *err = Slurp(err_path);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path SmallConfig() {
  const fs::path p = kWork / "small.json";
  std::ofstream(p) << R"({
  "name": "small",
  "seed": 3,
  "dataset": {"num_points": 1200, "num_classes": 5, "feature_dim": 16},
  "split": {"d1": 400, "d2": 400, "d3": 400, "attacker_members": 200, "attacker_nonmembers": 200},
  "target": {"epochs": 20},
  "purifier": {"epochs": 10},
  "attacks": {"epochs": 10, "inversion_epochs": 10}
})";
  return p;
}

std::string Common(const fs::path& out) {
  return "--config \"" + SmallConfig().string() + "\" --out \"" + out.string() + "\"";
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  static fs::path Fresh(const std::string& name) {
    const fs::path p = kWork / name;
    fs::remove_all(p);
    return p;
  }
};

TEST_F(CliTest, AttackBeforeTrainingReportsMissingArtifact) {
  const auto out = Fresh("missing");
  ASSERT_EQ(Cli("synth " + Common(out)), 0);
  std::string err;
  EXPECT_EQ(Cli("attack --arm none --attack nsh " + Common(out), &err), 15);
  const auto j = nlohmann::json::parse(err);
  EXPECT_EQ(j.at("error").at("code"), "missing_artifact");
  EXPECT_EQ(j.at("error").at("exit_code"), 15);
  EXPECT_NE(j.at("error").at("message").get<std::string>().find("train-target"), std::string::npos);
}

TEST_F(CliTest, UnknownConfigKeyIsAConfigError) {
  const fs::path bad = kWork / "bad.json";
  std::ofstream(bad) << R"({"name": "bad", "target": {"epochz": 3}})";
  std::string err;
  EXPECT_EQ(Cli("show-config --config \"" + bad.string() + "\"", &err), 17);
  EXPECT_EQ(nlohmann::json::parse(err).at("error").at("code"), "config_error");
}

TEST_F(CliTest, MalformedConfigIsAParseError) {
  const fs::path bad = kWork / "malformed.json";
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(Cli("show-config --config \"" + bad.string() + "\""), 14);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli("frobnicate"), 64);
  EXPECT_EQ(Cli("attack --preset desk"), 64);  // --arm is required
  EXPECT_EQ(Cli("show-config --preset nope"), 64);
}

TEST_F(CliTest, FullRunIsByteIdenticalAcrossDirectoriesAndThreadCounts) {
  const auto a = Fresh("run_a");
  const auto b = Fresh("run_b");
  ASSERT_EQ(Cli("run " + Common(a), nullptr, "PURIFIER_THREADS=1"), 0);
  ASSERT_EQ(Cli("run " + Common(b), nullptr, "PURIFIER_THREADS=3"), 0);
  for (const char* f : {"report_seed3.json", "report_seed3.csv", "latent_original_seed3.csv",
                        "latent_purified_seed3.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
  }
  // Attack results match apart from their wall-clock field.
  for (const char* f : {"full/nsh_seed3.json", "none/transfer_seed3.json", "full/inversion_seed3.json"}) {
    auto ja = nlohmann::json::parse(Slurp(a / f));
    auto jb = nlohmann::json::parse(Slurp(b / f));
    ja.erase("wall_clock");
    jb.erase("wall_clock");
    EXPECT_EQ(ja, jb) << f;
  }
  const auto report = nlohmann::json::parse(Slurp(a / "report_seed3.json"));
  for (const auto& arm : report.at("arms")) {
    EXPECT_TRUE(arm.at("attacks").at("nsh").is_object()) << arm.at("arm");
    EXPECT_TRUE(arm.at("acc_test").is_number());
  }
}

TEST_F(CliTest, RerunLeavesExistingArtifactsUntouched) {
  const auto out = Fresh("rerun");
  ASSERT_EQ(Cli("synth " + Common(out)), 0);
  ASSERT_EQ(Cli("train-target " + Common(out)), 0);
  const fs::path model = out / "target" / "model_seed3.prfm";
  const auto bytes = Slurp(model);
  const auto stamp = fs::last_write_time(model);
  ASSERT_EQ(Cli("train-target " + Common(out)), 0);
  EXPECT_EQ(fs::last_write_time(model), stamp);
  ASSERT_EQ(Cli("train-target --force " + Common(out)), 0);
  EXPECT_EQ(Slurp(model), bytes);
  EXPECT_NE(fs::last_write_time(model), stamp);
}

TEST_F(CliTest, ReportMarksMissingCellsAbsent) {
  const auto out = Fresh("partial");
  for (const char* verb : {"synth", "train-target", "train-purifier"}) ASSERT_EQ(Cli(std::string(verb) + " " + Common(out)), 0);
  ASSERT_EQ(Cli("attack --arm none --attack nsh " + Common(out)), 0);
  ASSERT_EQ(Cli("report " + Common(out)), 0);
  const auto report = nlohmann::json::parse(Slurp(out / "report_seed3.json"));
  for (const auto& arm : report.at("arms")) {
    const bool none = arm.at("arm") == "none";
    EXPECT_EQ(arm.at("attacks").at("nsh").is_object(), none);
    EXPECT_EQ(arm.at("attacks").at("mlleaks"), "absent");
    EXPECT_EQ(arm.at("inversion_error"), "absent");
  }
}

}  // namespace
