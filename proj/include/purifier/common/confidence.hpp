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
#ifndef PURIFIER_COMMON_CONFIDENCE_HPP_
#define PURIFIER_COMMON_CONFIDENCE_HPP_

#include <span>
#include <vector>

#include "purifier/nn/matrix.hpp"

namespace purifier {

inline constexpr double kSimplexTolerance = 1e-6;

bool IsOnSimplex(std::span<const double> probs, double tolerance = kSimplexTolerance);

// A point on the probability simplex: entries >= 0 summing to 1 (+-1e-6).
class ConfidenceVector {
 public:
  ConfidenceVector() = default;
  explicit ConfidenceVector(std::vector<double> probs);

  size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](size_t i) const { return probs_[i]; }

  // Lowest index wins ties.
  size_t argmax() const { return nn::ArgMax(probs()); }

  bool operator==(const ConfidenceVector&) const = default;

 private:
  std::vector<double> probs_;
};

ConfidenceVector RowConfidence(const nn::MatrixD& m, size_t row);

}  // namespace purifier

#endif  // PURIFIER_COMMON_CONFIDENCE_HPP_
