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
#ifndef PURIFIER_NN_MATRIX_HPP_
#define PURIFIER_NN_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "purifier/common/error.hpp"

namespace purifier::nn {

// Dense row-major matrix. Scalar is float for training and double where
// gradients are checked or confidences are compared at fine resolution.
template <typename Scalar>
class Matrix {
 public:
  using value_type = Scalar;

  Matrix() = default;
  Matrix(size_t rows, size_t cols, Scalar fill = Scalar{0})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(size_t rows, size_t cols, std::vector<Scalar> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    Require(data_.size() == rows_ * cols_, ErrorCode::kDimensionMismatch,
            "matrix data length " + std::to_string(data_.size()) + " != " +
                std::to_string(rows_) + "x" + std::to_string(cols_));
  }

  static Matrix FromRows(std::initializer_list<std::initializer_list<Scalar>> rows) {
    const size_t r = rows.size();
    const size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Scalar> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      Require(row.size() == c, ErrorCode::kDimensionMismatch, "ragged matrix literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Scalar& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  Scalar operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Scalar> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<Scalar> values() { return data_; }
  std::span<const Scalar> values() const { return data_; }

  template <typename Other>
  Matrix<Other> Cast() const {
    std::vector<Other> out(data_.begin(), data_.end());
    return Matrix<Other>(rows_, cols_, std::move(out));
  }

  bool AllFinite() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar v) { return std::isfinite(v); });
  }

  bool operator==(const Matrix& other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Scalar> data_;
};

using MatrixF = Matrix<float>;
using MatrixD = Matrix<double>;

template <typename Scalar>
Matrix<Scalar> SelectRows(const Matrix<Scalar>& m, std::span<const size_t> indices) {
  Matrix<Scalar> out(indices.size(), m.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    const auto src = m.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

// [a | b] column-wise concatenation.
template <typename Scalar>
Matrix<Scalar> ConcatCols(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch, "concat row mismatch");
  Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
  for (size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> SliceCols(const Matrix<Scalar>& m, size_t begin, size_t end) {
  Require(begin <= end && end <= m.cols(), ErrorCode::kDimensionMismatch, "column slice out of range");
  Matrix<Scalar> out(m.rows(), end - begin);
  for (size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(r);
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(begin),
              src.begin() + static_cast<std::ptrdiff_t>(end), out.row(r).begin());
  }
  return out;
}

// out = a * b
template <typename Scalar>
Matrix<Scalar> MatMul(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Require(a.cols() == b.rows(), ErrorCode::kDimensionMismatch,
          "matmul: " + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
  Matrix<Scalar> out(a.rows(), b.cols());
  const size_t n = b.cols();
  for (size_t i = 0; i < a.rows(); ++i) {
    Scalar* __restrict dst = out.row(i).data();
    for (size_t k = 0; k < a.cols(); ++k) {
      const Scalar aik = a(i, k);
      if (aik == Scalar{0}) continue;
      const Scalar* __restrict src = b.row(k).data();
      for (size_t j = 0; j < n; ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

// out = a^T * b
template <typename Scalar>
Matrix<Scalar> MatMulTransA(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch, "matmul^T: row mismatch");
  Matrix<Scalar> out(a.cols(), b.cols());
  const size_t n = b.cols();
  for (size_t r = 0; r < a.rows(); ++r) {
    const Scalar* __restrict src = b.row(r).data();
    for (size_t i = 0; i < a.cols(); ++i) {
      const Scalar ari = a(r, i);
      if (ari == Scalar{0}) continue;
      Scalar* __restrict dst = out.row(i).data();
      for (size_t j = 0; j < n; ++j) dst[j] += ari * src[j];
    }
  }
  return out;
}

// out = a * b^T
template <typename Scalar>
Matrix<Scalar> MatMulTransB(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Require(a.cols() == b.cols(), ErrorCode::kDimensionMismatch, "matmul B^T: col mismatch");
  Matrix<Scalar> out(a.rows(), b.rows());
  const size_t n = a.cols();
  for (size_t i = 0; i < a.rows(); ++i) {
    const Scalar* __restrict ar = a.row(i).data();
    for (size_t j = 0; j < b.rows(); ++j) {
      const Scalar* __restrict br = b.row(j).data();
      Scalar acc{0};
      for (size_t k = 0; k < n; ++k) acc += ar[k] * br[k];
      out(i, j) = acc;
    }
  }
  return out;
}

template <typename Scalar>
size_t ArgMax(std::span<const Scalar> values) {
  // Ties resolve to the lowest index.
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace purifier::nn

#endif  // PURIFIER_NN_MATRIX_HPP_
