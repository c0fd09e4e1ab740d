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

#include "dvdq/tensor.h"

#include <cmath>
#include <cstring>
#include <string>

#include "dvdq/error.h"

namespace dvdq {

Tensor2D::Tensor2D(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

Tensor2D::Tensor2D(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                          " does not match shape " + std::to_string(rows_) + "x" +
                          std::to_string(cols_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError("non-finite tensor element at flat index " + std::to_string(i));
    }
  }
}

std::vector<float> Tensor2D::column(std::size_t c) const {
  std::vector<float> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
  return out;
}

Tensor2D Tensor2D::transposed() const {
  Tensor2D t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Tensor2D::bitwise_equal(const Tensor2D& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         (data_.empty() ||
          std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0);
}

Tensor2D Tensor2D::identity(std::size_t n) {
  Tensor2D t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0f;
  return t;
}

Tensor2D matmul_transposed(const Tensor2D& a, const Tensor2D& b) {
  if (a.cols() != b.cols()) {
    throw ValidationError("matmul inner dimension mismatch: " + std::to_string(a.cols()) +
                          " vs " + std::to_string(b.cols()));
  }
  Tensor2D y(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ar = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto br = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < ar.size(); ++k) acc += double(ar[k]) * double(br[k]);
      y(i, j) = static_cast<float>(acc);
    }
  }
  return y;
}

double max_abs(const Tensor2D& t) {
  double m = 0.0;
  for (float v : t.data()) m = std::max(m, double(std::fabs(v)));
  return m;
}

double frobenius(const Tensor2D& t) {
  double s = 0.0;
  for (float v : t.data()) s += double(v) * double(v);
  return std::sqrt(s);
}

void require_same_shape(const Tensor2D& a, const Tensor2D& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()));
  }
}

double frobenius_diff(const Tensor2D& a, const Tensor2D& b) {
  require_same_shape(a, b, "frobenius_diff");
  double s = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    double d = double(da[i]) - double(db[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

double max_abs_diff(const Tensor2D& a, const Tensor2D& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    m = std::max(m, std::fabs(double(da[i]) - double(db[i])));
  return m;
}

}  // namespace dvdq
