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
#ifndef PURIFIER_ATTACKS_ORACLE_HPP_
#define PURIFIER_ATTACKS_ORACLE_HPP_

#include <optional>
#include <string_view>

#include "purifier/defense/bundle.hpp"
#include "purifier/nn/matrix.hpp"
#include "purifier/nn/mlp.hpp"

namespace purifier::attacks {

// The only view of the target an attack receives.
class QueryInterface {
 public:
  virtual ~QueryInterface() = default;
  virtual nn::MatrixD Query(const nn::MatrixD& inputs) const = 0;
  virtual size_t num_classes() const = 0;
};

enum class Arm { kNone, kReformer, kFull };

std::string_view ArmName(Arm arm);
Arm ParseArm(std::string_view name);

// Bundle flags for an arm (kNone is handled by not purifying at all).
defense::PurifierFlags ArmFlags(Arm arm);

// Serves F(x), or purify(x) when a bundle is attached. Holds copies, so the
// oracle outlives its inputs.
class TargetOracle : public QueryInterface {
 public:
  explicit TargetOracle(nn::Mlp<double> model) : model_(std::move(model)) {}
  TargetOracle(nn::Mlp<double> model, defense::PurifierBundle bundle)
      : model_(std::move(model)), bundle_(std::move(bundle)) {}

  // A target queried through the pipeline configured for arm.
  static TargetOracle ForArm(const nn::Mlp<double>& model, const defense::PurifierBundle& bundle, Arm arm);

  nn::MatrixD Query(const nn::MatrixD& inputs) const override;
  size_t num_classes() const override { return model_.output_dim(); }

 private:
  nn::Mlp<double> model_;
  std::optional<defense::PurifierBundle> bundle_;
};

}  // namespace purifier::attacks

#endif  // PURIFIER_ATTACKS_ORACLE_HPP_
