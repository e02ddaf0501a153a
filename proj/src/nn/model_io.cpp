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
#include "purifier/nn/model_io.hpp"

#include <cmath>

#include "purifier/common/io.hpp"

namespace purifier::nn {

std::string EncodeModel(const Mlp<float>& model) {
  ByteWriter out;
  out.Bytes(kModelMagic);
  out.U16(kModelFormatVersion);
  out.U32(static_cast<uint32_t>(model.num_layers()));
  for (const auto& layer : model.layers()) {
    out.U32(static_cast<uint32_t>(layer.spec.input_dim));
    out.U32(static_cast<uint32_t>(layer.spec.output_dim));
    out.U8(static_cast<uint8_t>(layer.spec.activation));
    for (float w : layer.weights.values()) out.F32(w);
    for (float b : layer.bias.values()) out.F32(b);
  }
  return out.buffer();
}

Mlp<float> DecodeModel(std::string_view bytes, const std::string& source) {
  ByteReader in(bytes, source);
  Require(in.Bytes(4) == kModelMagic, ErrorCode::kFormat, source + ": bad magic, expected PRFM");
  const uint16_t version = in.U16();
  Require(version == kModelFormatVersion, ErrorCode::kFormat,
          source + ": unsupported model format version " + std::to_string(version));
  const uint32_t count = in.U32();
  Require(count > 0, ErrorCode::kFormat, source + ": model has no layers");
  std::vector<DenseLayer<float>> layers;
  for (uint32_t i = 0; i < count; ++i) {
    LayerSpec spec;
    spec.input_dim = in.U32();
    spec.output_dim = in.U32();
    const uint8_t act = in.U8();
    Require(act <= static_cast<uint8_t>(Activation::kSoftmax), ErrorCode::kFormat,
            source + ": unknown activation code " + std::to_string(act));
    spec.activation = static_cast<Activation>(act);
    Require(spec.input_dim > 0 && spec.output_dim > 0, ErrorCode::kFormat, source + ": zero layer dimension");
    Matrix<float> w(spec.input_dim, spec.output_dim);
    for (auto& v : w.values()) v = in.F32();
    Matrix<float> b(1, spec.output_dim);
    for (auto& v : b.values()) v = in.F32();
    Require(w.AllFinite() && b.AllFinite(), ErrorCode::kFormat, source + ": non-finite parameter");
    layers.push_back({spec, std::move(w), std::move(b)});
  }
  Require(in.AtEnd(), ErrorCode::kFormat, source + ": trailing bytes after last layer");
  return Mlp<float>(std::move(layers));
}

template <typename Scalar>
void SaveModel(const std::filesystem::path& path, const Mlp<Scalar>& model) {
  WriteFileAtomic(path, EncodeModel(model.template Cast<float>()));
}

Mlp<float> LoadModel(const std::filesystem::path& path) {
  return DecodeModel(ReadFile(path), path.string());
}

template void SaveModel(const std::filesystem::path&, const Mlp<float>&);
template void SaveModel(const std::filesystem::path&, const Mlp<double>&);

}  // namespace purifier::nn
