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
#ifndef PURIFIER_NN_MODEL_IO_HPP_
#define PURIFIER_NN_MODEL_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "purifier/nn/mlp.hpp"

namespace purifier::nn {

// Model file layout (all integers and floats little-endian):
//   "PRFM" | u16 version | u32 layer_count |
//   per layer: u32 input_dim | u32 output_dim | u8 activation |
//              f32 weights[input_dim * output_dim] (row-major, input-major) |
//              f32 biases[output_dim]
inline constexpr std::string_view kModelMagic = "PRFM";
inline constexpr uint16_t kModelFormatVersion = 1;

std::string EncodeModel(const Mlp<float>& model);
Mlp<float> DecodeModel(std::string_view bytes, const std::string& source = "<memory>");

template <typename Scalar>
void SaveModel(const std::filesystem::path& path, const Mlp<Scalar>& model);

Mlp<float> LoadModel(const std::filesystem::path& path);

}  // namespace purifier::nn

#endif  // PURIFIER_NN_MODEL_IO_HPP_
