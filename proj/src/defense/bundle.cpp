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
#include "purifier/defense/bundle.hpp"

#include <cmath>
#include <string>

#include "json.hpp"
#include "purifier/classifier/target.hpp"
#include "purifier/common/error.hpp"
#include "purifier/common/io.hpp"
#include "purifier/common/random.hpp"
#include "purifier/nn/model_io.hpp"

namespace purifier::defense {

PurifierBundle TrainPurifier(const nn::Mlp<double>& target, const data::Dataset& d1, const data::Dataset& d2,
                             double acc_train, double acc_test, const PurifierConfig& config) {
  PurifierBundle bundle;
  bundle.flags = config.flags;
  bundle.label_weight = config.cvae.label_weight;
  bundle.kl_weight = config.cvae.kl_weight;
  bundle.noise_seed = DeriveSeed(config.seed, "purify-noise");

  auto cvae = config.cvae;
  cvae.seed = DeriveSeed(config.seed, "reformer");
  if (cvae.num_classes == 0) cvae.num_classes = d1.num_classes();
  bundle.reformer = TrainReformer(target, d2, cvae);

  bundle.swap_plan = MakeSwapPlan(ComputeSwapRate(acc_train, acc_test), d1.size(), config.seed);
  auto index = BuildIndex(target, d1, bundle.swap_plan, config.k_nn, config.tau_floor);
  if (index.size() > 0) {
    const auto again = classifier::PredictConfidences(target, nn::SelectRows(d1.features(), bundle.swap_plan.members));
    const double tau = CalibrateTau(index, again, config.tau_floor);
    index = PredictionIndex(index.entries(), config.k_nn, tau);
  }
  bundle.index = std::move(index);
  return bundle;
}

nn::MatrixD PurifyConfidences(const PurifierBundle& bundle, const nn::MatrixD& confidences) {
  nn::MatrixD out = bundle.flags.reformer_enabled
                        ? bundle.reformer.ReformBatch(confidences, NoiseMode::kSample, bundle.noise_seed)
                        : confidences;
  if (bundle.flags.swapper_enabled) {
    for (size_t r = 0; r < confidences.rows(); ++r) {
      if (MatchMember(bundle.index, confidences.row(r))) SwapLabelInPlace(out.row(r));
    }
  }
  return out;
}

ConfidenceVector PurifyConfidence(const PurifierBundle& bundle, const ConfidenceVector& c) {
  nn::MatrixD batch(1, c.size(), std::vector<double>(c.probs().begin(), c.probs().end()));
  return RowConfidence(PurifyConfidences(bundle, batch), 0);
}

nn::MatrixD PurifyBatch(const PurifierBundle& bundle, const nn::Mlp<double>& target, const nn::MatrixD& inputs) {
  return PurifyConfidences(bundle, classifier::PredictConfidences(target, inputs));
}

ConfidenceVector Purify(const PurifierBundle& bundle, const nn::Mlp<double>& target, std::span<const double> x) {
  return PurifyConfidence(bundle, classifier::PredictConfidence(target, x));
}

std::string EncodeIndex(const PredictionIndex& index) {
  ByteWriter w;
  w.Bytes(kIndexMagic);
  w.U32(static_cast<uint32_t>(index.size()));
  w.U32(static_cast<uint32_t>(index.dim()));
  for (double v : index.entries().values()) w.F32(static_cast<float>(v));
  return w.buffer();
}

PredictionIndex DecodeIndex(std::string_view bytes, size_t k_nn, double tau, const std::string& source) {
  ByteReader r(bytes, source);
  Require(r.Bytes(4) == kIndexMagic, ErrorCode::kFormat, source + ": bad index magic");
  const uint32_t count = r.U32();
  const uint32_t dim = r.U32();
  nn::MatrixD entries(count, dim);
  for (double& v : entries.values()) {
    v = static_cast<double>(r.F32());
    Require(std::isfinite(v), ErrorCode::kFormat, source + ": non-finite index entry");
  }
  Require(r.AtEnd(), ErrorCode::kFormat, source + ": trailing bytes");
  return PredictionIndex(std::move(entries), k_nn, tau);
}

namespace {

// Doubles survive the JSON round trip through their shortest representation.
nlohmann::ordered_json SidecarJson(const PurifierBundle& bundle) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["flags"] = {{"reformer_enabled", bundle.flags.reformer_enabled},
                {"swapper_enabled", bundle.flags.swapper_enabled}};
  j["swap_plan"] = {{"p_swap", bundle.swap_plan.p_swap},
                    {"seed", bundle.swap_plan.seed},
                    {"members", bundle.swap_plan.members}};
  j["index"] = {{"k_nn", bundle.index.k_nn()}, {"tau", bundle.index.tau()}, {"entries", bundle.index.size()}};
  j["reformer"] = {{"latent_dim", bundle.reformer.latent_dim()},
                   {"sigma", bundle.reformer.noise_scale()},
                   {"lambda", bundle.label_weight},
                   {"kl_weight", bundle.kl_weight},
                   {"noise_seed", bundle.noise_seed}};
  return j;
}

}  // namespace

void SaveBundle(const std::filesystem::path& dir, const PurifierBundle& bundle) {
  nn::SaveModel(dir / "encoder.prfm", bundle.reformer.encoder());
  nn::SaveModel(dir / "decoder.prfm", bundle.reformer.decoder());
  WriteFileAtomic(dir / "index.prfi", EncodeIndex(bundle.index));
  WriteFileAtomic(dir / "bundle.json", SidecarJson(bundle).dump(2) + "\n");
}

PurifierBundle LoadBundle(const std::filesystem::path& dir) {
  const auto sidecar_path = dir / "bundle.json";
  const std::string text = ReadFile(sidecar_path);
  PurifierBundle bundle;
  try {
    const auto j = nlohmann::json::parse(text);
    bundle.flags.reformer_enabled = j.at("flags").at("reformer_enabled").get<bool>();
    bundle.flags.swapper_enabled = j.at("flags").at("swapper_enabled").get<bool>();
    bundle.swap_plan.p_swap = j.at("swap_plan").at("p_swap").get<double>();
    bundle.swap_plan.seed = j.at("swap_plan").at("seed").get<uint64_t>();
    bundle.swap_plan.members = j.at("swap_plan").at("members").get<std::vector<size_t>>();
    const double sigma = j.at("reformer").at("sigma").get<double>();
    bundle.label_weight = j.at("reformer").at("lambda").get<double>();
    bundle.kl_weight = j.at("reformer").at("kl_weight").get<double>();
    bundle.noise_seed = j.at("reformer").at("noise_seed").get<uint64_t>();
    bundle.reformer = ConfidenceReformer(nn::LoadModel(dir / "encoder.prfm"), nn::LoadModel(dir / "decoder.prfm"), sigma);
    const auto index_path = dir / "index.prfi";
    bundle.index = DecodeIndex(ReadFile(index_path), j.at("index").at("k_nn").get<size_t>(),
                               j.at("index").at("tau").get<double>(), index_path.string());
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, sidecar_path.string() + ": " + e.what());
  }
  Require(bundle.index.size() == bundle.swap_plan.members.size(), ErrorCode::kFormat,
          "index entry count does not match the swap plan");
  Require(bundle.index.size() == 0 || bundle.index.dim() == bundle.reformer.num_classes(), ErrorCode::kFormat,
          "index width does not match the reformer");
  return bundle;
}

}  // namespace purifier::defense
