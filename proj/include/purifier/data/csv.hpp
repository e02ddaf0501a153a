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
#ifndef PURIFIER_DATA_CSV_HPP_
#define PURIFIER_DATA_CSV_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "purifier/data/dataset.hpp"

namespace purifier::data {

// Header row, comma separated. Every column that is not the label or the
// sensitive column is a numeric feature.
struct CsvSchema {
  std::string label_column = "label";
  std::optional<std::string> sensitive_column;
  size_t num_classes = 0;  // 0 = infer
  size_t num_sensitive = 0;
};

Dataset ParseCsv(const std::string& text, const CsvSchema& schema, const std::string& name = "csv");
Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema);

// Columns f0..f{d-1}, label[, sensitive]; doubles in shortest round-trip form.
std::string FormatCsv(const Dataset& ds);
void SaveCsv(const std::filesystem::path& path, const Dataset& ds);

}  // namespace purifier::data

#endif  // PURIFIER_DATA_CSV_HPP_
