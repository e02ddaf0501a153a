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
#ifndef PURIFIER_DATA_DATASET_HPP_
#define PURIFIER_DATA_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "purifier/nn/matrix.hpp"

namespace purifier::data {

struct DataPoint {
  std::vector<double> features;
  int label = 0;
  std::optional<int> sensitive;
};

// Column-major by role: one feature matrix plus parallel label vectors.
class Dataset {
 public:
  Dataset() = default;
  // num_classes / num_sensitive of 0 are inferred from the labels.
  Dataset(std::string name, nn::MatrixD features, std::vector<int> labels, std::vector<int> sensitive = {},
          size_t num_classes = 0, size_t num_sensitive = 0);

  const std::string& name() const { return name_; }
  size_t size() const { return labels_.size(); }
  size_t feature_dim() const { return features_.cols(); }
  size_t num_classes() const { return num_classes_; }
  size_t num_sensitive() const { return num_sensitive_; }
  bool has_sensitive() const { return !sensitive_.empty(); }

  const nn::MatrixD& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& sensitive() const { return sensitive_; }

  DataPoint point(size_t i) const;

  // Rows in the given order; keeps class counts of the parent.
  Dataset Subset(std::span<const size_t> indices, const std::string& name) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::string name_;
  nn::MatrixD features_;
  std::vector<int> labels_;
  std::vector<int> sensitive_;
  size_t num_classes_ = 0;
  size_t num_sensitive_ = 0;
};

}  // namespace purifier::data

#endif  // PURIFIER_DATA_DATASET_HPP_
