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
#include "purifier/common/confidence.hpp"

#include <cmath>
#include <string>

#include "purifier/common/error.hpp"

namespace purifier {

bool IsOnSimplex(std::span<const double> probs, double tolerance) {
  if (probs.empty()) return false;
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tolerance;
}

ConfidenceVector::ConfidenceVector(std::vector<double> probs) : probs_(std::move(probs)) {
  Require(IsOnSimplex(probs_), ErrorCode::kInvalidArgument,
          "confidence vector of size " + std::to_string(probs_.size()) + " is not on the simplex");
}

ConfidenceVector RowConfidence(const nn::MatrixD& m, size_t row) {
  const auto r = m.row(row);
  return ConfidenceVector(std::vector<double>(r.begin(), r.end()));
}

}  // namespace purifier
