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
#include <cstdint>

#include "dvdq/tensor.h"

namespace dvdq {

/// xoshiro256** seeded through SplitMix64.
///
/// The generator and every derived draw below are fixed so that seeded
/// outputs are reproducible across platforms and reimplementations:
///   - state[i] = splitmix64 output i (i = 0..3) starting from `seed`
///   - uniform() = (next() >> 11) * 2^-53, in [0, 1)
///   - normal()  = Box-Muller cosine branch: sqrt(-2 ln(1 - u1)) * cos(2 pi u2),
///                 two uniforms per draw, the sine branch is discarded
///   - below(n)  = next() % n with rejection of the biased tail
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
};

/// I.i.d. Normal(mean, std) matrix with an optional outlier subset.
///
/// Exactly floor(outlier_frac * rows * cols) positions are chosen uniformly
/// (partial Fisher-Yates over flat indices). Each chosen entry is redrawn as
/// mean + std * outlier_scale * z with z ~ Normal(0,1) conditioned on |z| >= 1,
/// so every outlier sits at least outlier_scale standard deviations out.
/// Draw order: all rows*cols base normals, then the index shuffle, then the
/// outlier magnitudes in shuffle order.
Tensor2D gaussian_tensor(std::uint64_t seed, std::size_t rows, std::size_t cols, float mean,
                         float std, double outlier_frac = 0.0, float outlier_scale = 1.0f);

}  // namespace dvdq
