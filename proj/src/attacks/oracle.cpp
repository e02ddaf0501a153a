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
#include "purifier/attacks/oracle.hpp"

#include <string>

#include "purifier/classifier/target.hpp"
#include "purifier/common/error.hpp"

namespace purifier::attacks {

std::string_view ArmName(Arm arm) {
  switch (arm) {
    case Arm::kNone:
      return "none";
    case Arm::kReformer:
      return "reformer";
    case Arm::kFull:
      return "full";
  }
  return "unknown";
}

Arm ParseArm(std::string_view name) {
  if (name == "none") return Arm::kNone;
  if (name == "reformer") return Arm::kReformer;
  if (name == "full") return Arm::kFull;
  Fail(ErrorCode::kConfig, "unknown arm '" + std::string(name) + "' (expected none, reformer or full)");
}

defense::PurifierFlags ArmFlags(Arm arm) {
  switch (arm) {
    case Arm::kNone:
      return {false, false};
    case Arm::kReformer:
      return {true, false};
    case Arm::kFull:
      return {true, true};
  }
  return {};
}

TargetOracle TargetOracle::ForArm(const nn::Mlp<double>& model, const defense::PurifierBundle& bundle, Arm arm) {
  if (arm == Arm::kNone) return TargetOracle(model);
  auto configured = bundle;
  configured.flags = ArmFlags(arm);
  return TargetOracle(model, std::move(configured));
}

nn::MatrixD TargetOracle::Query(const nn::MatrixD& inputs) const {
  if (bundle_) return defense::PurifyBatch(*bundle_, model_, inputs);
  return classifier::PredictConfidences(model_, inputs);
}

}  // namespace purifier::attacks
