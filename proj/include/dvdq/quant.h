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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvdq/tensor.h"

namespace dvdq {

/// Which tensor axis indexes quantization channels. For a weight matrix
/// (out x in), Row is per-output-channel.
enum class ChannelAxis { Row, Col };

std::string to_string(ChannelAxis axis);
ChannelAxis channel_axis_from_string(const std::string& s);

inline std::size_t channel_count(const Tensor2D& t, ChannelAxis axis) {
  return axis == ChannelAxis::Row ? t.rows() : t.cols();
}

struct ChannelBounds {
  float alpha = 0.0f;  // lower bound
  float beta = 0.0f;   // upper bound
};

/// Per-channel affine quantization parameters. Step and zero code are derived
/// from (alpha, beta, bits) and never stored.
struct QuantParams {
  int bits = 8;
  std::vector<ChannelBounds> channels;

  int qmax() const { return (1 << bits) - 1; }
  bool degenerate(std::size_t c) const { return !(channels[c].alpha < channels[c].beta); }
  double step(std::size_t c) const {
    return (double(channels[c].beta) - double(channels[c].alpha)) / qmax();
  }
  int zero_code(std::size_t c) const;

  /// Throws ValidationError unless 2 <= bits <= 8 and alpha <= beta everywhere.
  void validate() const;
};

/// Logical (unpacked) quantized tensor: one code per element, row-major.
struct QuantizedTensor {
  std::vector<std::uint8_t> codes;
  QuantParams params;
  std::size_t rows = 0;
  std::size_t cols = 0;
  ChannelAxis axis = ChannelAxis::Row;

  std::size_t channel_of(std::size_t r, std::size_t c) const {
    return axis == ChannelAxis::Row ? r : c;
  }
  bool operator==(const QuantizedTensor& other) const;
};

// Scalar kernels shared by every quantizer in the library. The code is
// round-half-away-from-zero of (clamp(x) - alpha) * qmax / (beta - alpha),
// evaluated in float64; degenerate channels emit code 0 and dequantize to alpha.

inline std::uint8_t quantize_value(float x, float alpha, float beta, int qmax) {
  if (!(alpha < beta)) return 0;
  const double xc = std::clamp(double(x), double(alpha), double(beta));
  const double v = (xc - double(alpha)) * qmax / (double(beta) - double(alpha));
  const double code = std::clamp(std::round(v), 0.0, double(qmax));
  return static_cast<std::uint8_t>(code);
}

inline float dequantize_value(std::uint8_t code, float alpha, float beta, int qmax) {
  if (!(alpha < beta)) return alpha;
  return static_cast<float>(double(alpha) + code * ((double(beta) - double(alpha)) / qmax));
}

/// Per-channel bounds at the channel's observed min and max.
QuantParams minmax_params(const Tensor2D& t, int bits, ChannelAxis axis = ChannelAxis::Row);

QuantizedTensor quantize(const Tensor2D& t, const QuantParams& p,
                         ChannelAxis axis = ChannelAxis::Row);

Tensor2D dequantize(const QuantizedTensor& q);

/// dequantize(quantize(t, minmax_params(t))).
Tensor2D fake_quantize(const Tensor2D& t, int bits, ChannelAxis axis = ChannelAxis::Row);

/// Per-tensor min-max fake quantization: one (min, max) pair for the whole
/// tensor. Used for dynamic activation quantization baselines.
Tensor2D fake_quantize_per_tensor(const Tensor2D& t, int bits);

/// Migration scales s_i = max|X_i|^a / max|W_i|^(1-a) over the shared input
/// dimension (columns of both). Columns where either maximum is zero get 1.
std::vector<float> smoothquant_scales(const Tensor2D& x, const Tensor2D& w, float alpha_mix);

/// Returns t with column j divided by s[j] (divide = true) or multiplied.
Tensor2D scale_columns(const Tensor2D& t, std::span<const float> s, bool divide);

struct ErrorReport {
  double mse = 0.0;
  double max_abs = 0.0;
  double err_mean = 0.0;
  double err_std = 0.0;  // population standard deviation
  std::vector<double> per_channel_mse;

  nlohmann::json to_json() const;
  static ErrorReport from_json(const nlohmann::json& j);

  /// Column order of csv_row().
  static std::string csv_header();
  /// mse,max_abs,err_mean,err_std,channels with %.9g formatting.
  std::string csv_row() const;
};

/// Statistics of err = reconstructed - original, accumulated in float64.
ErrorReport error_report(const Tensor2D& original, const Tensor2D& reconstructed,
                         ChannelAxis axis = ChannelAxis::Row);

/// Fixed-range histogram of (reconstructed - original). Values outside
/// [lo, hi] land in the edge bins.
std::vector<std::uint64_t> error_histogram(const Tensor2D& original,
                                           const Tensor2D& reconstructed, double lo, double hi,
                                           std::size_t bins);

}  // namespace dvdq
