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

#include <span>
#include <vector>

#include "dvdq/quant.h"
#include "dvdq/tensor.h"

namespace dvdq {

/// Progressive Bounded Quantization settings.
///
/// Candidate t (0 <= t <= steps) uses the bounds
///   alpha_t = alpha_0 + t * shrink,  beta_t = beta_0 - t * shrink,
///   shrink  = (beta_0 - alpha_0) / (2 * (grid + 1)),
/// where (alpha_0, beta_0) are the channel's min and max. The grid is shared by
/// all step counts up to `grid`, so a smaller `steps` searches a prefix of the
/// same candidates. If steps exceeds grid, the grid widens to `steps`.
struct PbqConfig {
  static constexpr int kDefaultGrid = 100;

  int bits = 4;
  int steps = kDefaultGrid;
  int grid = kDefaultGrid;
  ChannelAxis axis = ChannelAxis::Row;

  int effective_grid() const { return steps > grid ? steps : grid; }
  void validate() const;
};

struct PbqChannelResult {
  float best_alpha = 0.0f;
  float best_beta = 0.0f;
  double best_error = 0.0;  // sum of squared reconstruction errors
  int best_step_index = 0;
};

/// Searches candidates t = 0..steps and keeps the one with the smallest
/// clamp-quantize-dequantize squared error; ties go to the smaller t.
PbqChannelResult pbq_search_channel(std::span<const float> w, const PbqConfig& cfg);

/// Brute-force re-evaluation of the same candidate set with a plain scalar
/// loop. Kept separate from the search path so the two can cross-check.
PbqChannelResult pbq_oracle_channel(std::span<const float> w, const PbqConfig& cfg);

struct PbqResult {
  QuantizedTensor quantized;
  ErrorReport report;
  std::vector<PbqChannelResult> channels;
};

/// Independent per-channel search (parallel over channels, results in
/// channel order) followed by quantization with each channel's best bounds.
PbqResult pbq_quantize(const Tensor2D& w, const PbqConfig& cfg);

}  // namespace dvdq
