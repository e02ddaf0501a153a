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
#include "purifier/data/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace purifier::data {

Dataset::Dataset(std::string name, nn::MatrixD features, std::vector<int> labels, std::vector<int> sensitive,
                 size_t num_classes, size_t num_sensitive)
    : name_(std::move(name)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      sensitive_(std::move(sensitive)) {
  Require(!labels_.empty(), ErrorCode::kInvalidArgument, "dataset '" + name_ + "' is empty");
  Require(features_.rows() == labels_.size(), ErrorCode::kDimensionMismatch,
          "dataset '" + name_ + "': feature rows != label count");
  Require(features_.cols() > 0, ErrorCode::kDimensionMismatch, "dataset '" + name_ + "': no features");
  Require(sensitive_.empty() || sensitive_.size() == labels_.size(), ErrorCode::kDimensionMismatch,
          "dataset '" + name_ + "': sensitive count != label count");
  Require(features_.AllFinite(), ErrorCode::kInvalidArgument, "dataset '" + name_ + "': non-finite feature");

  const int max_label = *std::max_element(labels_.begin(), labels_.end());
  const int min_label = *std::min_element(labels_.begin(), labels_.end());
  Require(min_label >= 0, ErrorCode::kInvalidArgument, "dataset '" + name_ + "': negative label");
  num_classes_ = num_classes == 0 ? static_cast<size_t>(max_label) + 1 : num_classes;
  Require(static_cast<size_t>(max_label) < num_classes_, ErrorCode::kInvalidArgument,
          "dataset '" + name_ + "': label out of range");
  if (!sensitive_.empty()) {
    const int max_s = *std::max_element(sensitive_.begin(), sensitive_.end());
    const int min_s = *std::min_element(sensitive_.begin(), sensitive_.end());
    Require(min_s >= 0, ErrorCode::kInvalidArgument, "dataset '" + name_ + "': negative sensitive value");
    num_sensitive_ = num_sensitive == 0 ? static_cast<size_t>(max_s) + 1 : num_sensitive;
    Require(static_cast<size_t>(max_s) < num_sensitive_, ErrorCode::kInvalidArgument,
            "dataset '" + name_ + "': sensitive value out of range");
  }
}

DataPoint Dataset::point(size_t i) const {
  DataPoint p;
  const auto row = features_.row(i);
  p.features.assign(row.begin(), row.end());
  p.label = labels_[i];
  if (!sensitive_.empty()) p.sensitive = sensitive_[i];
  return p;
}

Dataset Dataset::Subset(std::span<const size_t> indices, const std::string& name) const {
  std::vector<int> labels;
  std::vector<int> sensitive;
  labels.reserve(indices.size());
  for (size_t i : indices) {
    Require(i < size(), ErrorCode::kInvalidArgument, "subset index out of range");
    labels.push_back(labels_[i]);
    if (!sensitive_.empty()) sensitive.push_back(sensitive_[i]);
  }
  return Dataset(name, nn::SelectRows(features_, indices), std::move(labels), std::move(sensitive), num_classes_,
                 num_sensitive_);
}

}  // namespace purifier::data
