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
#ifndef PURIFIER_EVAL_REPORT_HPP_
#define PURIFIER_EVAL_REPORT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purifier/attacks/attacks.hpp"
#include "purifier/eval/diagnostics.hpp"

namespace purifier::eval {

inline constexpr const char* kAbsent = "absent";

struct AttackCell {
  double accuracy = 0.0;
  double auc = 0.5;
  double threshold = 0.5;
};

struct ArmReport {
  std::string arm;
  std::optional<double> acc_train;
  std::optional<double> acc_test;
  std::map<std::string, AttackCell> attacks;
  std::optional<double> inversion_error;
  std::optional<double> attribute_accuracy;
  std::optional<GapStats> gap_stats;
};

// Rows are arms, columns attacks. Cells that were never computed are written
// as "absent". Wall-clock fields are left out so equal inputs give equal bytes;
// see TimingsJson.
struct EvalReport {
  uint64_t seed = 0;
  std::vector<std::string> arms;
  std::vector<std::string> attacks;
  std::map<std::string, ArmReport> results;
  std::optional<double> latent_dispersion_ratio;
  std::string latent_scatter;  // file name of the scatter CSV
};

AttackCell CellOf(const attacks::MembershipAttackResult& result);

// Rejects results for arms or attacks outside the configured matrix.
EvalReport AssembleReport(uint64_t seed, std::vector<std::string> arms, std::vector<std::string> attack_names,
                          const std::vector<ArmReport>& results);

size_t PresentCells(const EvalReport& report);

std::string ReportJson(const EvalReport& report);
std::string ReportCsv(const EvalReport& report);

std::string TimingsJson(const Timings& target, const Timings& defense);

}  // namespace purifier::eval

#endif  // PURIFIER_EVAL_REPORT_HPP_
