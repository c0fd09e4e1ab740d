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

#include "dvdq/hadamard.h"

#include <cmath>
#include <string>

#include "dvdq/error.h"

namespace dvdq {

HadamardContext::HadamardContext(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("HadamardContext: dimension must be positive");
  for (int bit = 63; bit >= 0; --bit) {
    const std::size_t b = std::size_t{1} << bit;
    if (dim & b) blocks_.push_back(b);
  }
}

void fwht_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h *= 2) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = v[j];
        const double y = v[j + h];
        v[j] = x + y;
        v[j + h] = x - y;
      }
    }
  }
}

void HadamardContext::apply(std::span<float> v) const {
  if (v.size() != dim_) {
    throw ValidationError("Hadamard transform: vector length " + std::to_string(v.size()) +
                          " does not match dim " + std::to_string(dim_));
  }
  std::vector<double> buf;
  std::size_t offset = 0;
  for (std::size_t b : blocks_) {
    buf.assign(v.begin() + offset, v.begin() + offset + b);
    fwht_inplace(buf);
    const double norm = 1.0 / std::sqrt(double(b));
    for (std::size_t i = 0; i < b; ++i) v[offset + i] = static_cast<float>(buf[i] * norm);
    offset += b;
  }
}

Tensor2D fht_rows(const Tensor2D& t, const HadamardContext& ctx) {
  if (t.cols() != ctx.dim()) {
    throw ValidationError("fht_rows: tensor has " + std::to_string(t.cols()) +
                          " columns, transform dim is " + std::to_string(ctx.dim()));
  }
  Tensor2D out = t;
  for (std::size_t r = 0; r < out.rows(); ++r) ctx.apply(out.row(r));
  return out;
}

double rotation_invariance_check(const Tensor2D& x, const Tensor2D& w,
                                 const HadamardContext& ctx) {
  const Tensor2D direct = matmul_transposed(x, w);
  const Tensor2D rotated = matmul_transposed(fht_rows(x, ctx), fht_rows(w, ctx));
  return max_abs_diff(rotated, direct) / (max_abs(direct) + 1e-30);
}

}  // namespace dvdq
