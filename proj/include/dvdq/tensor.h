// Copyright 2026 The dvdq Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dvdq {

/// Dense row-major matrix of finite float32 values.
///
/// Weights are stored as (output channels x input channels), activations as
/// (tokens x features). A 1-D array is represented as a single row.
class Tensor2D {
 public:
  Tensor2D() = default;

  /// Zero-filled tensor.
  Tensor2D(std::size_t rows, std::size_t cols);

  /// Takes ownership of `data`. Throws ValidationError if the length does not
  /// match rows * cols or any element is NaN/Inf.
  Tensor2D(std::size_t rows, std::size_t cols, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  float& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  std::span<const float> row(std::size_t r) const {
    return std::span<const float>(data_).subspan(r * cols_, cols_);
  }
  std::span<float> row(std::size_t r) {
    return std::span<float>(data_).subspan(r * cols_, cols_);
  }

  /// Copy of column `c`.
  std::vector<float> column(std::size_t c) const;

  Tensor2D transposed() const;

  /// Bitwise payload and shape equality.
  bool bitwise_equal(const Tensor2D& other) const;

  static Tensor2D identity(std::size_t n);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

/// Y = A * B^T in float64 accumulation, rounded to float32.
/// A is (m x k), B is (n x k); the result is (m x n).
Tensor2D matmul_transposed(const Tensor2D& a, const Tensor2D& b);

/// Max absolute element; 0 for an empty tensor.
double max_abs(const Tensor2D& t);

/// Frobenius norm computed in float64.
double frobenius(const Tensor2D& t);

/// Frobenius norm of (a - b).
double frobenius_diff(const Tensor2D& a, const Tensor2D& b);

/// Max absolute elementwise difference.
double max_abs_diff(const Tensor2D& a, const Tensor2D& b);

void require_same_shape(const Tensor2D& a, const Tensor2D& b, const char* what);

}  // namespace dvdq
