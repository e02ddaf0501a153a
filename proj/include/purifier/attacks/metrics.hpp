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
#ifndef PURIFIER_ATTACKS_METRICS_HPP_
#define PURIFIER_ATTACKS_METRICS_HPP_

#include <span>

namespace purifier::attacks {

// Area under the ROC curve; tied scores count one half.
double Auc(std::span<const double> scores, std::span<const int> is_member);

// Fraction of correct decisions for "member iff score >= threshold".
double ThresholdAccuracy(std::span<const double> scores, std::span<const int> is_member, double threshold);

// Threshold (midpoint between adjacent distinct scores) with the highest
// accuracy; the lowest such threshold wins ties.
double BestThreshold(std::span<const double> scores, std::span<const int> is_member);

}  // namespace purifier::attacks

#endif  // PURIFIER_ATTACKS_METRICS_HPP_
