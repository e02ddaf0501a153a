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
#include "purifier/experiment/config.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "purifier/common/error.hpp"
#include "purifier/common/io.hpp"

namespace purifier::experiment {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

using Setter = std::function<void(const json&)>;

// Applies each key through its setter; anything unlisted is a config error.
void ApplySection(const json& j, const std::string& section, const std::map<std::string, Setter>& setters) {
  Require(j.is_object(), ErrorCode::kConfig, "'" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    Require(it != setters.end(), ErrorCode::kConfig, "unknown key '" + section + "." + key + "'");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      Fail(ErrorCode::kConfig, "bad value for '" + section + "." + key + "': " + e.what());
    }
  }
}

template <typename T>
Setter Into(T& field) {
  return [&field](const json& v) { field = v.get<T>(); };
}

ordered_json OptionalNumber(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

void ApplySynth(const json& j, data::SynthSpec& s) {
  ApplySection(j, "dataset", {
      {"source", [](const json& v) {
         Require(v.get<std::string>() == "synthetic", ErrorCode::kConfig, "dataset.source mismatch");
       }},
      {"name", Into(s.name)},
      {"num_points", Into(s.num_points)},
      {"num_classes", Into(s.num_classes)},
      {"feature_dim", Into(s.feature_dim)},
      {"model", [&s](const json& v) { s.model = data::ParseFeatureModel(v.get<std::string>()); }},
      {"separation", Into(s.separation)},
      {"stddev", Into(s.stddev)},
      {"sibling_separation", Into(s.sibling_separation)},
      {"family_size", Into(s.family_size)},
      {"class_flip_fraction", Into(s.class_flip_fraction)},
      {"high_prob", Into(s.high_prob)},
      {"low_prob", Into(s.low_prob)},
      {"informative_fraction", Into(s.informative_fraction)},
      {"label_noise", Into(s.label_noise)},
      {"num_sensitive", Into(s.num_sensitive)},
      {"sensitive_strength", Into(s.sensitive_strength)},
  });
}

void ApplyCsv(const json& j, ExperimentConfig& c) {
  std::filesystem::path path;
  std::optional<std::string> sensitive;
  ApplySection(j, "dataset", {
      {"source", [](const json&) {}},
      {"path", [&path](const json& v) { path = v.get<std::string>(); }},
      {"label_column", Into(c.csv_schema.label_column)},
      {"sensitive_column", [&sensitive](const json& v) {
         if (!v.is_null()) sensitive = v.get<std::string>();
       }},
      {"num_classes", Into(c.csv_schema.num_classes)},
      {"num_sensitive", Into(c.csv_schema.num_sensitive)},
  });
  Require(!path.empty(), ErrorCode::kConfig, "dataset.path is required for a csv source");
  c.csv_path = path;
  c.csv_schema.sensitive_column = sensitive;
  c.synth.reset();
}

void ApplyClassifier(const json& j, classifier::ClassifierConfig& t) {
  ApplySection(j, "target", {
      {"hidden_sizes", Into(t.hidden_sizes)},
      {"activation", [&t](const json& v) { t.hidden_activation = nn::ParseActivation(v.get<std::string>()); }},
      {"optimizer", [&t](const json& v) { t.optimizer.kind = nn::ParseOptimizerKind(v.get<std::string>()); }},
      {"learning_rate", Into(t.optimizer.learning_rate)},
      {"weight_decay", Into(t.optimizer.weight_decay)},
      {"epochs", Into(t.epochs)},
      {"batch_size", Into(t.batch_size)},
      {"init_stddev", Into(t.init_stddev)},
      {"min_overfit_gap", [&t](const json& v) {
         t.min_overfit_gap = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
       }},
  });
}

void ApplyPurifier(const json& j, defense::PurifierConfig& p) {
  auto& c = p.cvae;
  ApplySection(j, "purifier", {
      {"encoder_hidden", Into(c.encoder_hidden)},
      {"decoder_hidden", Into(c.decoder_hidden)},
      {"latent_dim", Into(c.latent_dim)},
      {"activation", [&c](const json& v) { c.hidden_activation = nn::ParseActivation(v.get<std::string>()); }},
      {"label_weight", Into(c.label_weight)},
      {"kl_weight", Into(c.kl_weight)},
      {"noise_scale", Into(c.noise_scale)},
      {"learning_rate", Into(c.optimizer.learning_rate)},
      {"epochs", Into(c.epochs)},
      {"batch_size", Into(c.batch_size)},
      {"init_stddev", Into(c.init_stddev)},
      {"k_nn", Into(p.k_nn)},
      {"tau_floor", Into(p.tau_floor)},
      {"reformer_enabled", Into(p.flags.reformer_enabled)},
      {"swapper_enabled", Into(p.flags.swapper_enabled)},
  });
}

void ApplyAttacks(const json& j, ExperimentConfig& c) {
  auto& a = c.attack;
  ApplySection(j, "attacks", {
      {"run", Into(c.attacks)},
      {"hidden_units", Into(a.hidden_units)},
      {"epochs", Into(a.epochs)},
      {"learning_rate", Into(a.learning_rate)},
      {"batch_size", Into(a.batch_size)},
      {"init_stddev", Into(a.init_stddev)},
      {"mlleaks_top_k", Into(a.mlleaks_top_k)},
      {"blindmi_set_size", Into(a.blindmi_set_size)},
      {"blindmi_replace_fraction", Into(a.blindmi_replace_fraction)},
      {"inversion_train_fraction", Into(a.inversion_train_fraction)},
      {"inversion_log_features", Into(a.inversion_log_features)},
      {"inversion_epochs", Into(a.inversion_epochs)},
  });
}

}  // namespace

bool IsMembershipAttack(const std::string& name) {
  return std::find(kMembershipAttacks.begin(), kMembershipAttacks.end(), name) != kMembershipAttacks.end();
}

ExperimentConfig DeskConfig() {
  ExperimentConfig c;
  data::SynthSpec s;
  s.name = "desk";
  s.num_points = 6000;
  s.num_classes = 20;
  s.feature_dim = 64;
  s.model = data::FeatureModel::kGaussian;
  s.separation = 2.0;
  s.stddev = 0.55;
  s.family_size = 1;
  c.synth = s;
  c.split = {2000, 2000, 2000, 1000, 1000, 0};

  c.target.hidden_sizes = {128, 64};
  c.target.hidden_activation = nn::Activation::kTanh;
  c.target.epochs = 60;
  c.target.batch_size = 64;
  c.target.optimizer.learning_rate = 0.002;
  c.target.init_stddev = 0.1;

  auto& cvae = c.purifier.cvae;
  cvae.num_classes = s.num_classes;
  cvae.latent_dim = 2;
  cvae.label_weight = 0.001;
  cvae.kl_weight = 10.0;
  cvae.noise_scale = 0.1;
  cvae.epochs = 100;
  cvae.optimizer.learning_rate = 0.003;
  c.purifier.k_nn = 1;
  c.purifier.tau_floor = 1e-6;

  c.attacks = {"nsh", "mlleaks", "adaptive", "blindmi", "gap", "transfer", "inversion", "boundary"};
  c.arms = {attacks::Arm::kNone, attacks::Arm::kReformer, attacks::Arm::kFull};
  return WithSeed(c, 1);
}

ExperimentConfig DeskAttributeConfig() {
  auto c = DeskConfig();
  c.name = "desk-attribute";
  c.output_dir = "runs/desk-attribute";
  c.synth->name = "desk-attribute";
  c.synth->stddev = 0.3;
  c.synth->num_sensitive = 5;
  c.synth->sensitive_strength = 0.9;
  c.attacks = {"attribute"};
  return WithSeed(c, 1);
}

ExperimentConfig WithSeed(ExperimentConfig config, uint64_t seed) {
  config.seed = seed;
  if (config.synth) config.synth->seed = seed;
  config.split.seed = seed;
  config.target.seed = seed;
  config.purifier.seed = seed;
  config.purifier.cvae.seed = seed;
  config.attack.shadow = config.target;
  return config;
}

void ValidateConfig(const ExperimentConfig& c) {
  Require(c.synth.has_value() != c.csv_path.has_value(), ErrorCode::kConfig,
          "exactly one dataset source (synthetic or csv) is required");
  if (c.synth) {
    try {
      data::ValidateSynthSpec(*c.synth);
    } catch (const Error& e) {
      Fail(ErrorCode::kConfig, e.what());
    }
  }
  Require(c.split.d1 > 0 && c.split.d2 > 0 && c.split.d3 > 0, ErrorCode::kConfig, "split sizes must be positive");
  Require(c.split.attacker_members < c.split.d1 && c.split.attacker_nonmembers < c.split.d3, ErrorCode::kConfig,
          "attacker subsets must leave held-out evaluation rows");
  Require(!c.target.hidden_sizes.empty() && c.target.epochs > 0, ErrorCode::kConfig,
          "target needs hidden layers and epochs");
  Require(!c.arms.empty(), ErrorCode::kConfig, "no arms configured");
  std::set<std::string> seen;
  for (const auto& a : c.attacks) {
    Require(std::find(kAllAttacks.begin(), kAllAttacks.end(), a) != kAllAttacks.end(), ErrorCode::kConfig,
            "unknown attack '" + a + "'");
    Require(seen.insert(a).second, ErrorCode::kConfig, "attack '" + a + "' listed twice");
  }
  Require(c.histogram_bins > 0, ErrorCode::kConfig, "histogram_bins must be positive");
}

ExperimentConfig ParseConfig(const std::string& text, const ExperimentConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = base;
  std::optional<uint64_t> seed;
  ApplySection(j, "config", {
      {"name", Into(c.name)},
      {"seed", [&seed](const json& v) { seed = v.get<uint64_t>(); }},
      {"output_dir", [&c](const json& v) { c.output_dir = v.get<std::string>(); }},
      {"dataset", [&c](const json& v) {
         const std::string source = v.value("source", c.csv_path ? "csv" : "synthetic");
         if (source == "csv") {
           ApplyCsv(v, c);
         } else {
           Require(source == "synthetic", ErrorCode::kConfig, "dataset.source must be synthetic or csv");
           if (!c.synth) c.synth = data::SynthSpec{};
           c.csv_path.reset();
           ApplySynth(v, *c.synth);
         }
       }},
      {"split", [&c](const json& v) {
         ApplySection(v, "split", {{"d1", Into(c.split.d1)},
                                   {"d2", Into(c.split.d2)},
                                   {"d3", Into(c.split.d3)},
                                   {"attacker_members", Into(c.split.attacker_members)},
                                   {"attacker_nonmembers", Into(c.split.attacker_nonmembers)}});
       }},
      {"target", [&c](const json& v) { ApplyClassifier(v, c.target); }},
      {"purifier", [&c](const json& v) { ApplyPurifier(v, c.purifier); }},
      {"attacks", [&c](const json& v) { ApplyAttacks(v, c); }},
      {"arms", [&c](const json& v) {
         c.arms.clear();
         for (const auto& name : v.get<std::vector<std::string>>()) c.arms.push_back(attacks::ParseArm(name));
       }},
      {"histogram_bins", Into(c.histogram_bins)},
  });
  if (c.synth) c.purifier.cvae.num_classes = c.synth->num_classes;
  c = WithSeed(std::move(c), seed.value_or(c.seed));
  ValidateConfig(c);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path, const ExperimentConfig& base) {
  return ParseConfig(ReadFile(path), base);
}

std::string ConfigJson(const ExperimentConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.string();
  if (c.synth) {
    const auto& s = *c.synth;
    j["dataset"] = {{"source", "synthetic"},
                    {"name", s.name},
                    {"num_points", s.num_points},
                    {"num_classes", s.num_classes},
                    {"feature_dim", s.feature_dim},
                    {"model", std::string(data::FeatureModelName(s.model))},
                    {"separation", s.separation},
                    {"stddev", s.stddev},
                    {"sibling_separation", s.sibling_separation},
                    {"family_size", s.family_size},
                    {"class_flip_fraction", s.class_flip_fraction},
                    {"high_prob", s.high_prob},
                    {"low_prob", s.low_prob},
                    {"informative_fraction", s.informative_fraction},
                    {"label_noise", s.label_noise},
                    {"num_sensitive", s.num_sensitive},
                    {"sensitive_strength", s.sensitive_strength}};
  } else {
    j["dataset"] = {{"source", "csv"},
                    {"path", c.csv_path->string()},
                    {"label_column", c.csv_schema.label_column},
                    {"sensitive_column", c.csv_schema.sensitive_column ? ordered_json(*c.csv_schema.sensitive_column)
                                                                       : ordered_json(nullptr)},
                    {"num_classes", c.csv_schema.num_classes},
                    {"num_sensitive", c.csv_schema.num_sensitive}};
  }
  j["split"] = {{"d1", c.split.d1},
                {"d2", c.split.d2},
                {"d3", c.split.d3},
                {"attacker_members", c.split.attacker_members},
                {"attacker_nonmembers", c.split.attacker_nonmembers}};
  const auto& t = c.target;
  j["target"] = {{"hidden_sizes", t.hidden_sizes},
                 {"activation", std::string(nn::ActivationName(t.hidden_activation))},
                 {"optimizer", std::string(nn::OptimizerKindName(t.optimizer.kind))},
                 {"learning_rate", t.optimizer.learning_rate},
                 {"weight_decay", t.optimizer.weight_decay},
                 {"epochs", t.epochs},
                 {"batch_size", t.batch_size},
                 {"init_stddev", t.init_stddev},
                 {"min_overfit_gap", OptionalNumber(t.min_overfit_gap)}};
  const auto& p = c.purifier;
  j["purifier"] = {{"encoder_hidden", p.cvae.encoder_hidden},
                   {"decoder_hidden", p.cvae.decoder_hidden},
                   {"latent_dim", p.cvae.latent_dim},
                   {"activation", std::string(nn::ActivationName(p.cvae.hidden_activation))},
                   {"label_weight", p.cvae.label_weight},
                   {"kl_weight", p.cvae.kl_weight},
                   {"noise_scale", p.cvae.noise_scale},
                   {"learning_rate", p.cvae.optimizer.learning_rate},
                   {"epochs", p.cvae.epochs},
                   {"batch_size", p.cvae.batch_size},
                   {"init_stddev", p.cvae.init_stddev},
                   {"k_nn", p.k_nn},
                   {"tau_floor", p.tau_floor},
                   {"reformer_enabled", p.flags.reformer_enabled},
                   {"swapper_enabled", p.flags.swapper_enabled}};
  const auto& a = c.attack;
  j["attacks"] = {{"run", c.attacks},
                  {"hidden_units", a.hidden_units},
                  {"epochs", a.epochs},
                  {"learning_rate", a.learning_rate},
                  {"batch_size", a.batch_size},
                  {"init_stddev", a.init_stddev},
                  {"mlleaks_top_k", a.mlleaks_top_k},
                  {"blindmi_set_size", a.blindmi_set_size},
                  {"blindmi_replace_fraction", a.blindmi_replace_fraction},
                  {"inversion_train_fraction", a.inversion_train_fraction},
                  {"inversion_log_features", a.inversion_log_features},
                  {"inversion_epochs", a.inversion_epochs}};
  std::vector<std::string> arms;
  for (auto arm : c.arms) arms.emplace_back(attacks::ArmName(arm));
  j["arms"] = arms;
  j["histogram_bins"] = c.histogram_bins;
  return j.dump(2) + "\n";
}

}  // namespace purifier::experiment
