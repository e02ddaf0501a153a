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
#ifndef PURIFIER_NN_MLP_HPP_
#define PURIFIER_NN_MLP_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "purifier/nn/matrix.hpp"

namespace purifier::nn {

// Numeric values are part of the model file format.
enum class Activation : uint8_t {
  kIdentity = 0,
  kRelu = 1,
  kTanh = 2,
  kSigmoid = 3,
  kSoftmax = 4,
};

std::string_view ActivationName(Activation activation);
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  size_t input_dim = 0;
  size_t output_dim = 0;
  Activation activation = Activation::kIdentity;

  bool operator==(const LayerSpec&) const = default;
};

// sizes = {in, h1, ..., out}; hidden layers use `hidden`, the last uses `output`.
std::vector<LayerSpec> ChainSpecs(std::span<const size_t> sizes, Activation hidden, Activation output);

template <typename Scalar>
struct DenseLayer {
  LayerSpec spec;
  Matrix<Scalar> weights;  // input_dim x output_dim
  Matrix<Scalar> bias;     // 1 x output_dim
};

template <typename Scalar>
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer<Scalar>> layers, uint64_t seed = 0);

  // Weights ~ normal(0, init_stddev), biases zero.
  static Mlp Initialize(const std::vector<LayerSpec>& specs, uint64_t seed, double init_stddev = 0.01);

  size_t input_dim() const { return layers_.front().spec.input_dim; }
  size_t output_dim() const { return layers_.back().spec.output_dim; }
  size_t num_layers() const { return layers_.size(); }
  size_t parameter_count() const;
  uint64_t seed() const { return seed_; }

  const std::vector<DenseLayer<Scalar>>& layers() const { return layers_; }
  std::vector<DenseLayer<Scalar>>& mutable_layers() { return layers_; }
  std::vector<LayerSpec> specs() const;

  template <typename Other>
  Mlp<Other> Cast() const {
    std::vector<DenseLayer<Other>> out;
    out.reserve(layers_.size());
    for (const auto& layer : layers_) {
      out.push_back({layer.spec, layer.weights.template Cast<Other>(), layer.bias.template Cast<Other>()});
    }
    return Mlp<Other>(std::move(out), seed_);
  }

 private:
  std::vector<DenseLayer<Scalar>> layers_;
  uint64_t seed_ = 0;
};

// activations[0] is the input batch; activations[i + 1] is the output of layer i.
template <typename Scalar>
using Activations = std::vector<Matrix<Scalar>>;

template <typename Scalar>
Activations<Scalar> Forward(const Mlp<Scalar>& model, const Matrix<Scalar>& batch);

// Final-layer output only.
template <typename Scalar>
Matrix<Scalar> Predict(const Mlp<Scalar>& model, const Matrix<Scalar>& batch);

template <typename Scalar>
void ApplyActivation(Activation activation, Matrix<Scalar>& values);

// Maps dL/d(output) to dL/d(pre-activation) using the stored layer output.
template <typename Scalar>
Matrix<Scalar> ActivationBackward(Activation activation, const Matrix<Scalar>& output,
                                  const Matrix<Scalar>& output_grad);

template <typename Scalar>
struct MlpGradients {
  std::vector<Matrix<Scalar>> weights;
  std::vector<Matrix<Scalar>> biases;
};

template <typename Scalar>
MlpGradients<Scalar> ZeroGradients(const Mlp<Scalar>& model);

template <typename Scalar>
struct BackwardResult {
  MlpGradients<Scalar> params;
  Matrix<Scalar> input_grad;  // empty unless requested
};

// preact_grad is dL/dz for the last layer's pre-activation z.
template <typename Scalar>
BackwardResult<Scalar> Backward(const Mlp<Scalar>& model, const Activations<Scalar>& activations,
                                Matrix<Scalar> preact_grad, bool want_input_grad);

}  // namespace purifier::nn

#endif  // PURIFIER_NN_MLP_HPP_
