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
#include "purifier/nn/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "purifier/common/random.hpp"

namespace purifier::nn {

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kSoftmax:
      return "softmax";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  for (auto a : {Activation::kIdentity, Activation::kRelu, Activation::kTanh, Activation::kSigmoid,
                 Activation::kSoftmax}) {
    if (ActivationName(a) == name) return a;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown activation '" + std::string(name) + "'");
}

std::vector<LayerSpec> ChainSpecs(std::span<const size_t> sizes, Activation hidden, Activation output) {
  Require(sizes.size() >= 2, ErrorCode::kInvalidArgument, "need at least input and output sizes");
  std::vector<LayerSpec> specs;
  for (size_t i = 0; i + 1 < sizes.size(); ++i) {
    const bool last = i + 2 == sizes.size();
    specs.push_back({sizes[i], sizes[i + 1], last ? output : hidden});
  }
  return specs;
}

template <typename Scalar>
Mlp<Scalar>::Mlp(std::vector<DenseLayer<Scalar>> layers, uint64_t seed)
    : layers_(std::move(layers)), seed_(seed) {
  Require(!layers_.empty(), ErrorCode::kInvalidArgument, "mlp needs at least one layer");
  for (size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    const std::string where = "layer " + std::to_string(i);
    Require(layer.spec.input_dim > 0 && layer.spec.output_dim > 0, ErrorCode::kInvalidArgument,
            where + ": dims must be positive");
    Require(layer.weights.rows() == layer.spec.input_dim && layer.weights.cols() == layer.spec.output_dim,
            ErrorCode::kDimensionMismatch, where + ": weight shape does not match spec");
    Require(layer.bias.rows() == 1 && layer.bias.cols() == layer.spec.output_dim,
            ErrorCode::kDimensionMismatch, where + ": bias shape does not match spec");
    if (i > 0) {
      Require(layers_[i - 1].spec.output_dim == layer.spec.input_dim, ErrorCode::kDimensionMismatch,
              where + ": input dim does not chain with previous layer");
    }
  }
}

template <typename Scalar>
Mlp<Scalar> Mlp<Scalar>::Initialize(const std::vector<LayerSpec>& specs, uint64_t seed, double init_stddev) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, init_stddev);
  std::vector<DenseLayer<Scalar>> layers;
  layers.reserve(specs.size());
  for (const auto& spec : specs) {
    Matrix<Scalar> w(spec.input_dim, spec.output_dim);
    for (auto& v : w.values()) v = static_cast<Scalar>(normal(rng));
    layers.push_back({spec, std::move(w), Matrix<Scalar>(1, spec.output_dim)});
  }
  return Mlp(std::move(layers), seed);
}

template <typename Scalar>
size_t Mlp<Scalar>::parameter_count() const {
  size_t n = 0;
  for (const auto& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

template <typename Scalar>
std::vector<LayerSpec> Mlp<Scalar>::specs() const {
  std::vector<LayerSpec> out;
  for (const auto& layer : layers_) out.push_back(layer.spec);
  return out;
}

template <typename Scalar>
void ApplyActivation(Activation activation, Matrix<Scalar>& values) {
  switch (activation) {
    case Activation::kIdentity:
      return;
    case Activation::kRelu:
      for (auto& v : values.values()) v = v > Scalar{0} ? v : Scalar{0};
      return;
    case Activation::kTanh:
      for (auto& v : values.values()) v = std::tanh(v);
      return;
    case Activation::kSigmoid:
      for (auto& v : values.values()) {
        if (v >= Scalar{0}) {
          v = Scalar{1} / (Scalar{1} + std::exp(-v));
        } else {
          const Scalar e = std::exp(v);
          v = e / (Scalar{1} + e);
        }
      }
      return;
    case Activation::kSoftmax:
      for (size_t r = 0; r < values.rows(); ++r) {
        auto row = values.row(r);
        const Scalar shift = *std::max_element(row.begin(), row.end());
        Scalar total{0};
        for (auto& v : row) {
          v = std::exp(v - shift);
          total += v;
        }
        for (auto& v : row) v /= total;
      }
      return;
  }
}

template <typename Scalar>
Activations<Scalar> Forward(const Mlp<Scalar>& model, const Matrix<Scalar>& batch) {
  Require(batch.cols() == model.input_dim(), ErrorCode::kDimensionMismatch,
          "forward: batch has " + std::to_string(batch.cols()) + " columns, model expects " +
              std::to_string(model.input_dim()));
  Activations<Scalar> acts;
  acts.reserve(model.num_layers() + 1);
  acts.push_back(batch);
  for (const auto& layer : model.layers()) {
    Matrix<Scalar> z = MatMul(acts.back(), layer.weights);
    const auto b = layer.bias.row(0);
    for (size_t r = 0; r < z.rows(); ++r) {
      auto row = z.row(r);
      for (size_t c = 0; c < row.size(); ++c) row[c] += b[c];
    }
    ApplyActivation(layer.spec.activation, z);
    acts.push_back(std::move(z));
  }
  return acts;
}

template <typename Scalar>
Matrix<Scalar> Predict(const Mlp<Scalar>& model, const Matrix<Scalar>& batch) {
  Require(batch.cols() == model.input_dim(), ErrorCode::kDimensionMismatch,
          "predict: batch has " + std::to_string(batch.cols()) + " columns, model expects " +
              std::to_string(model.input_dim()));
  Matrix<Scalar> current = batch;
  for (const auto& layer : model.layers()) {
    Matrix<Scalar> z = MatMul(current, layer.weights);
    const auto b = layer.bias.row(0);
    for (size_t r = 0; r < z.rows(); ++r) {
      auto row = z.row(r);
      for (size_t c = 0; c < row.size(); ++c) row[c] += b[c];
    }
    ApplyActivation(layer.spec.activation, z);
    current = std::move(z);
  }
  return current;
}

template <typename Scalar>
Matrix<Scalar> ActivationBackward(Activation activation, const Matrix<Scalar>& output,
                                  const Matrix<Scalar>& output_grad) {
  Require(output.rows() == output_grad.rows() && output.cols() == output_grad.cols(),
          ErrorCode::kDimensionMismatch, "activation backward shape mismatch");
  Matrix<Scalar> g = output_grad;
  auto gv = g.values();
  const auto ov = output.values();
  switch (activation) {
    case Activation::kIdentity:
      break;
    case Activation::kRelu:
      for (size_t i = 0; i < gv.size(); ++i) gv[i] = ov[i] > Scalar{0} ? gv[i] : Scalar{0};
      break;
    case Activation::kTanh:
      for (size_t i = 0; i < gv.size(); ++i) gv[i] *= Scalar{1} - ov[i] * ov[i];
      break;
    case Activation::kSigmoid:
      for (size_t i = 0; i < gv.size(); ++i) gv[i] *= ov[i] * (Scalar{1} - ov[i]);
      break;
    case Activation::kSoftmax:
      // dz_i = p_i (g_i - sum_j g_j p_j)
      for (size_t r = 0; r < g.rows(); ++r) {
        auto grow = g.row(r);
        const auto prow = output.row(r);
        Scalar dot{0};
        for (size_t c = 0; c < grow.size(); ++c) dot += grow[c] * prow[c];
        for (size_t c = 0; c < grow.size(); ++c) grow[c] = prow[c] * (grow[c] - dot);
      }
      break;
  }
  return g;
}

template <typename Scalar>
MlpGradients<Scalar> ZeroGradients(const Mlp<Scalar>& model) {
  MlpGradients<Scalar> g;
  for (const auto& layer : model.layers()) {
    g.weights.emplace_back(layer.weights.rows(), layer.weights.cols());
    g.biases.emplace_back(1, layer.bias.cols());
  }
  return g;
}

template <typename Scalar>
BackwardResult<Scalar> Backward(const Mlp<Scalar>& model, const Activations<Scalar>& activations,
                                Matrix<Scalar> preact_grad, bool want_input_grad) {
  const size_t n_layers = model.num_layers();
  Require(activations.size() == n_layers + 1, ErrorCode::kDimensionMismatch,
          "backward: activation cache does not match model depth");
  Require(preact_grad.rows() == activations.back().rows() && preact_grad.cols() == model.output_dim(),
          ErrorCode::kDimensionMismatch, "backward: output gradient shape mismatch");
  BackwardResult<Scalar> result;
  result.params.weights.resize(n_layers);
  result.params.biases.resize(n_layers);
  Matrix<Scalar> delta = std::move(preact_grad);
  for (size_t li = n_layers; li-- > 0;) {
    const auto& layer = model.layers()[li];
    result.params.weights[li] = MatMulTransA(activations[li], delta);
    Matrix<Scalar> db(1, delta.cols());
    for (size_t r = 0; r < delta.rows(); ++r) {
      const auto row = delta.row(r);
      for (size_t c = 0; c < row.size(); ++c) db(0, c) += row[c];
    }
    result.params.biases[li] = std::move(db);
    if (li == 0 && !want_input_grad) break;
    Matrix<Scalar> upstream = MatMulTransB(delta, layer.weights);
    if (li == 0) {
      result.input_grad = std::move(upstream);
      break;
    }
    delta = ActivationBackward(model.layers()[li - 1].spec.activation, activations[li], upstream);
  }
  return result;
}

#define PURIFIER_INSTANTIATE_MLP(S)                                                              \
  template class Mlp<S>;                                                                         \
  template Activations<S> Forward(const Mlp<S>&, const Matrix<S>&);                              \
  template Matrix<S> Predict(const Mlp<S>&, const Matrix<S>&);                                   \
  template void ApplyActivation(Activation, Matrix<S>&);                                         \
  template Matrix<S> ActivationBackward(Activation, const Matrix<S>&, const Matrix<S>&);         \
  template MlpGradients<S> ZeroGradients(const Mlp<S>&);                                         \
  template BackwardResult<S> Backward(const Mlp<S>&, const Activations<S>&, Matrix<S>, bool);

PURIFIER_INSTANTIATE_MLP(float)
PURIFIER_INSTANTIATE_MLP(double)

#undef PURIFIER_INSTANTIATE_MLP

}  // namespace purifier::nn
