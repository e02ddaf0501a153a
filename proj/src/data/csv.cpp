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
#include "purifier/data/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string_view>

#include "purifier/common/error.hpp"
#include "purifier/common/io.hpp"

namespace purifier::data {
namespace {

std::vector<std::string_view> SplitLine(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double ParseNumber(std::string_view cell, size_t line_no, const std::string& column) {
  cell = Trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  Require(!cell.empty() && ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(value),
          ErrorCode::kParse,
          "csv line " + std::to_string(line_no) + ": column '" + column + "' has non-numeric value '" +
              std::string(cell) + "'");
  return value;
}

int ParseClass(std::string_view cell, size_t line_no, const std::string& column) {
  Require(!Trim(cell).empty(), ErrorCode::kParse,
          "csv line " + std::to_string(line_no) + ": missing value in column '" + column + "'");
  const double v = ParseNumber(cell, line_no, column);
  Require(v >= 0 && v == std::floor(v), ErrorCode::kParse,
          "csv line " + std::to_string(line_no) + ": column '" + column + "' must be a non-negative integer");
  return static_cast<int>(v);
}

void AppendNumber(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

Dataset ParseCsv(const std::string& text, const CsvSchema& schema, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 1;
  Require(static_cast<bool>(std::getline(in, line)), ErrorCode::kParse, "csv: missing header row");
  const auto header = SplitLine(line);
  std::vector<std::string> columns;
  for (auto h : header) columns.emplace_back(Trim(h));

  std::optional<size_t> label_col;
  std::optional<size_t> sensitive_col;
  std::vector<size_t> feature_cols;
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == schema.label_column) {
      label_col = c;
    } else if (schema.sensitive_column && columns[c] == *schema.sensitive_column) {
      sensitive_col = c;
    } else {
      feature_cols.push_back(c);
    }
  }
  Require(label_col.has_value(), ErrorCode::kParse, "csv: no label column '" + schema.label_column + "'");
  Require(!schema.sensitive_column || sensitive_col.has_value(), ErrorCode::kParse,
          "csv: no sensitive column '" + schema.sensitive_column.value_or("") + "'");
  Require(!feature_cols.empty(), ErrorCode::kParse, "csv: no feature columns");

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<int> sensitive;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitLine(line);
    Require(cells.size() == columns.size(), ErrorCode::kDimensionMismatch,
            "csv line " + std::to_string(line_no) + ": expected " + std::to_string(columns.size()) +
                " cells, found " + std::to_string(cells.size()));
    for (size_t c : feature_cols) values.push_back(ParseNumber(cells[c], line_no, columns[c]));
    labels.push_back(ParseClass(cells[*label_col], line_no, columns[*label_col]));
    if (sensitive_col) sensitive.push_back(ParseClass(cells[*sensitive_col], line_no, columns[*sensitive_col]));
  }
  Require(!labels.empty(), ErrorCode::kParse, "csv: no data rows");
  const size_t rows = labels.size();
  return Dataset(name, nn::MatrixD(rows, feature_cols.size(), std::move(values)), std::move(labels),
                 std::move(sensitive), schema.num_classes, schema.num_sensitive);
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema) {
  return ParseCsv(ReadFile(path), schema, path.stem().string());
}

std::string FormatCsv(const Dataset& ds) {
  std::string out;
  for (size_t j = 0; j < ds.feature_dim(); ++j) out += "f" + std::to_string(j) + ",";
  out += "label";
  if (ds.has_sensitive()) out += ",sensitive";
  out += "\n";
  for (size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features().row(i)) {
      AppendNumber(out, v);
      out += ',';
    }
    out += std::to_string(ds.labels()[i]);
    if (ds.has_sensitive()) out += "," + std::to_string(ds.sensitive()[i]);
    out += "\n";
  }
  return out;
}

void SaveCsv(const std::filesystem::path& path, const Dataset& ds) { WriteFileAtomic(path, FormatCsv(ds)); }

}  // namespace purifier::data
