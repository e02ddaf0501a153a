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
#include "purifier/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "purifier/common/error.hpp"

namespace purifier::eval {
namespace {

using nlohmann::ordered_json;

ordered_json OrAbsent(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(kAbsent); }

std::string CsvNumber(const std::optional<double>& v) {
  if (!v) return kAbsent;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

bool Contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

ordered_json GapJson(const GapStats& s) {
  ordered_json j;
  j["bins"] = s.bins;
  j["confidence"] = {{"max_gap", s.confidence.max_gap}, {"avg_gap", s.confidence.avg_gap}};
  j["uncertainty"] = {{"max_gap", s.uncertainty.max_gap}, {"avg_gap", s.uncertainty.avg_gap}};
  return j;
}

}  // namespace

AttackCell CellOf(const attacks::MembershipAttackResult& result) {
  return {result.accuracy, result.auc, result.threshold};
}

EvalReport AssembleReport(uint64_t seed, std::vector<std::string> arms, std::vector<std::string> attack_names,
                          const std::vector<ArmReport>& results) {
  Require(!arms.empty(), ErrorCode::kConfig, "report needs at least one arm");
  EvalReport report;
  report.seed = seed;
  for (const auto& r : results) {
    Require(Contains(arms, r.arm), ErrorCode::kConfig, "result for unconfigured arm '" + r.arm + "'");
    Require(!report.results.contains(r.arm), ErrorCode::kConfig, "duplicate results for arm '" + r.arm + "'");
    for (const auto& [name, cell] : r.attacks) {
      Require(Contains(attack_names, name), ErrorCode::kConfig, "result for unconfigured attack '" + name + "'");
    }
    report.results.emplace(r.arm, r);
  }
  report.arms = std::move(arms);
  report.attacks = std::move(attack_names);
  return report;
}

size_t PresentCells(const EvalReport& report) {
  size_t n = 0;
  for (const auto& arm : report.arms) {
    auto it = report.results.find(arm);
    if (it == report.results.end()) continue;
    for (const auto& attack : report.attacks) n += it->second.attacks.contains(attack) ? 1 : 0;
  }
  return n;
}

std::string ReportJson(const EvalReport& report) {
  ordered_json j;
  j["seed"] = report.seed;
  j["attacks"] = report.attacks;
  ordered_json arms = ordered_json::array();
  for (const auto& arm : report.arms) {
    ordered_json a;
    a["arm"] = arm;
    auto it = report.results.find(arm);
    const ArmReport* r = it == report.results.end() ? nullptr : &it->second;
    a["acc_train"] = r ? OrAbsent(r->acc_train) : ordered_json(kAbsent);
    a["acc_test"] = r ? OrAbsent(r->acc_test) : ordered_json(kAbsent);
    ordered_json cells;
    for (const auto& attack : report.attacks) {
      if (r && r->attacks.contains(attack)) {
        const auto& c = r->attacks.at(attack);
        cells[attack] = {{"accuracy", c.accuracy}, {"auc", c.auc}, {"threshold", c.threshold}};
      } else {
        cells[attack] = kAbsent;
      }
    }
    a["attacks"] = cells;
    a["boundary"] = "not implemented";
    a["inversion_error"] = r ? OrAbsent(r->inversion_error) : ordered_json(kAbsent);
    a["attribute_accuracy"] = r ? OrAbsent(r->attribute_accuracy) : ordered_json(kAbsent);
    a["gap_stats"] = r && r->gap_stats ? GapJson(*r->gap_stats) : ordered_json(kAbsent);
    arms.push_back(a);
  }
  j["arms"] = arms;
  j["latent"] = {{"dispersion_ratio", OrAbsent(report.latent_dispersion_ratio)},
                 {"scatter", report.latent_scatter.empty() ? std::string(kAbsent) : report.latent_scatter}};
  return j.dump(2) + "\n";
}

std::string ReportCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "arm,acc_train,acc_test";
  for (const auto& attack : report.attacks) out << ',' << attack << "_accuracy," << attack << "_auc";
  out << ",inversion_error,attribute_accuracy,confidence_max_gap,confidence_avg_gap,uncertainty_max_gap,"
         "uncertainty_avg_gap\n";
  for (const auto& arm : report.arms) {
    auto it = report.results.find(arm);
    const ArmReport empty;
    const ArmReport& r = it == report.results.end() ? empty : it->second;
    out << arm << ',' << CsvNumber(r.acc_train) << ',' << CsvNumber(r.acc_test);
    for (const auto& attack : report.attacks) {
      auto c = r.attacks.find(attack);
      if (c == r.attacks.end()) {
        out << ',' << kAbsent << ',' << kAbsent;
      } else {
        out << ',' << CsvNumber(c->second.accuracy) << ',' << CsvNumber(c->second.auc);
      }
    }
    out << ',' << CsvNumber(r.inversion_error) << ',' << CsvNumber(r.attribute_accuracy);
    if (r.gap_stats) {
      const auto& g = *r.gap_stats;
      out << ',' << CsvNumber(g.confidence.max_gap) << ',' << CsvNumber(g.confidence.avg_gap) << ','
          << CsvNumber(g.uncertainty.max_gap) << ',' << CsvNumber(g.uncertainty.avg_gap);
    } else {
      out << ',' << kAbsent << ',' << kAbsent << ',' << kAbsent << ',' << kAbsent;
    }
    out << '\n';
  }
  return out.str();
}

std::string TimingsJson(const Timings& target, const Timings& defense) {
  const auto ratios = Efficiency(target, defense);
  ordered_json j;
  j["target"] = {{"train_seconds", target.train_seconds}, {"test_seconds", target.test_seconds}};
  j["defense"] = {{"train_seconds", defense.train_seconds}, {"test_seconds", defense.test_seconds}};
  j["train_ratio"] = ratios.train_ratio;
  j["test_ratio"] = ratios.test_ratio;
  return j.dump(2) + "\n";
}

}  // namespace purifier::eval
