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

#include "dvdq/tensor.h"

namespace dvdq {

/// Normalized block-diagonal Walsh-Hadamard transform over a feature
/// dimension. The dimension is split into its binary decomposition, largest
/// block first (96 -> 64 + 32); each block applies the Sylvester Hadamard
/// matrix scaled by 1/sqrt(block). The induced matrix H is symmetric and
/// orthogonal, so H = H^T = H^-1.
class HadamardContext {
 public:
  explicit HadamardContext(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<std::size_t>& blocks() const { return blocks_; }

  /// In-place transform of one vector of length dim().
  void apply(std::span<float> v) const;

 private:
  std::size_t dim_;
  std::vector<std::size_t> blocks_;
};

/// In-place unnormalized butterfly on a power-of-two length buffer.
void fwht_inplace(std::span<double> v);

/// Multiplies every row by H (equivalently computes t * H). O(n log n) per row.
Tensor2D fht_rows(const Tensor2D& t, const HadamardContext& ctx);

/// max|(XH)(WH)^T - XW^T| / (max|XW^T| + tiny). Diagnostic, not a hot path.
double rotation_invariance_check(const Tensor2D& x, const Tensor2D& w,
                                 const HadamardContext& ctx);

}  // namespace dvdq
