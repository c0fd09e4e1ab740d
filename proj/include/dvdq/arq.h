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

#include <vector>

#include "dvdq/hadamard.h"
#include "dvdq/pbq.h"
#include "dvdq/quant.h"
#include "dvdq/tensor.h"

namespace dvdq {

/// Per-column activation scales (the diagonal of Lambda). Always positive.
struct ScaleVector {
  std::vector<float> s;
};

/// s_j = max_i |x_rot(i, j)|, with 1.0 for all-zero columns.
ScaleVector online_scales(const Tensor2D& x_rot);

struct ArqActivation {
  QuantizedTensor q;  // codes of (X H) / Lambda on the [-1, 1] lattice
  ScaleVector scales;
};

/// Rotate, divide each column by its own infinity norm, quantize over [-1, 1].
/// Everything is derived from `x` alone; there is no calibration input.
ArqActivation arq_quantize_activation(const Tensor2D& x, const HadamardContext& ctx, int bits_a);

/// Dequantized (X H) estimate: dequantize(q) with column j multiplied by s_j.
Tensor2D arq_reconstruct_activation(const ArqActivation& a);

/// Offline weight preparation: PBQ applied to W H.
PbqResult arq_prepare_weight(const Tensor2D& w, const HadamardContext& ctx, const PbqConfig& cfg);

enum class MatmulPath {
  // Dequantize both operands, apply Lambda, multiply in float.
  Reference,
  // Integer code products with zero-centered activation codes; Lambda and the
  // weight step/offset are applied around the integer products.
  Integer,
};

/// Y ~= X W^T from activations X and PBQ-quantized rotated weights (W H).
Tensor2D arq_matmul(const Tensor2D& x, const QuantizedTensor& w_rot_q, const HadamardContext& ctx,
                    int bits_a, MatmulPath path = MatmulPath::Reference);

/// Column ranges (max - min) and the max/median ratio before and after rotation.
struct RangeDiagnostic {
  std::vector<double> pre_ranges;
  std::vector<double> post_ranges;
  double pre_ratio = 0.0;
  double post_ratio = 0.0;
};

/// max column range / median column range; 0 when the median range is 0.
double column_range_ratio(const Tensor2D& t);
std::vector<double> column_ranges(const Tensor2D& t);
RangeDiagnostic outlier_redistribution(const Tensor2D& x, const HadamardContext& ctx);

}  // namespace dvdq
