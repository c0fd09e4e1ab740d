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

#include "dvdq/arq.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "dvdq/error.h"

namespace dvdq {

ScaleVector online_scales(const Tensor2D& x_rot) {
  ScaleVector sv;
  sv.s.assign(x_rot.cols(), 0.0f);
  for (std::size_t r = 0; r < x_rot.rows(); ++r) {
    const auto row = x_rot.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) sv.s[c] = std::max(sv.s[c], std::fabs(row[c]));
  }
  for (auto& v : sv.s)
    if (v == 0.0f) v = 1.0f;
  return sv;
}

ArqActivation arq_quantize_activation(const Tensor2D& x, const HadamardContext& ctx, int bits_a) {
  if (bits_a < 2 || bits_a > 8) throw ValidationError("arq: bits_a must lie in [2, 8]");
  const Tensor2D rotated = fht_rows(x, ctx);
  ArqActivation out;
  out.scales = online_scales(rotated);
  // Division (not multiplication by a reciprocal) so each column's extreme
  // lands exactly on +-1.
  const Tensor2D unit = scale_columns(rotated, out.scales.s, /*divide=*/true);
  QuantParams p;
  p.bits = bits_a;
  p.channels.assign(unit.rows(), {-1.0f, 1.0f});
  out.q = quantize(unit, p, ChannelAxis::Row);
  return out;
}

Tensor2D arq_reconstruct_activation(const ArqActivation& a) {
  return scale_columns(dequantize(a.q), a.scales.s, /*divide=*/false);
}

PbqResult arq_prepare_weight(const Tensor2D& w, const HadamardContext& ctx, const PbqConfig& cfg) {
  return pbq_quantize(fht_rows(w, ctx), cfg);
}

namespace {

Tensor2D integer_matmul(const ArqActivation& act, const QuantizedTensor& w) {
  const std::size_t m = act.q.rows;
  const std::size_t k = act.q.cols;
  const std::size_t n = w.rows;
  const std::int32_t qa = act.q.params.qmax();
  const auto& s = act.scales.s;

  // On the symmetric [-1, 1] lattice x = -1 + 2c/qa = (2c - qa) / qa, so the
  // zero-centered integer code is 2c - qa.
  std::vector<std::int32_t> xc(m * k);
  for (std::size_t i = 0; i < m * k; ++i) xc[i] = 2 * std::int32_t(act.q.codes[i]) - qa;

  Tensor2D y(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int32_t* xr = xc.data() + i * k;
    double offset_sum = 0.0;  // sum_j s_j * xc_ij
    for (std::size_t j = 0; j < k; ++j) offset_sum += double(s[j]) * xr[j];
    for (std::size_t o = 0; o < n; ++o) {
      const std::uint8_t* wr = w.codes.data() + o * k;
      double acc = 0.0;  // sum_j s_j * (xc_ij * code_oj)
      for (std::size_t j = 0; j < k; ++j) {
        const std::int32_t prod = xr[j] * std::int32_t(wr[j]);
        acc += double(s[j]) * prod;
      }
      const auto& ch = w.params.channels[o];
      double val;
      if (w.params.degenerate(o)) {
        val = double(ch.alpha) * offset_sum;
      } else {
        val = w.params.step(o) * acc + double(ch.alpha) * offset_sum;
      }
      y(i, o) = static_cast<float>(val / qa);
    }
  }
  return y;
}

}  // namespace

Tensor2D arq_matmul(const Tensor2D& x, const QuantizedTensor& w_rot_q, const HadamardContext& ctx,
                    int bits_a, MatmulPath path) {
  if (w_rot_q.cols != x.cols() || x.cols() != ctx.dim()) {
    throw ValidationError("arq_matmul: activation dim " + std::to_string(x.cols()) +
                          ", weight dim " + std::to_string(w_rot_q.cols) + ", rotation dim " +
                          std::to_string(ctx.dim()) + " must agree");
  }
  if (w_rot_q.axis != ChannelAxis::Row)
    throw ValidationError("arq_matmul: weights must be quantized per output channel");
  const ArqActivation act = arq_quantize_activation(x, ctx, bits_a);
  if (path == MatmulPath::Integer) return integer_matmul(act, w_rot_q);
  return matmul_transposed(arq_reconstruct_activation(act), dequantize(w_rot_q));
}

std::vector<double> column_ranges(const Tensor2D& t) {
  std::vector<double> ranges(t.cols(), 0.0);
  if (t.rows() == 0) return ranges;
  for (std::size_t c = 0; c < t.cols(); ++c) {
    double lo = t(0, c), hi = t(0, c);
    for (std::size_t r = 1; r < t.rows(); ++r) {
      lo = std::min(lo, double(t(r, c)));
      hi = std::max(hi, double(t(r, c)));
    }
    ranges[c] = hi - lo;
  }
  return ranges;
}

namespace {

double ratio_of(std::vector<double> ranges) {
  if (ranges.empty()) return 0.0;
  const double mx = *std::max_element(ranges.begin(), ranges.end());
  std::sort(ranges.begin(), ranges.end());
  const std::size_t n = ranges.size();
  const double median = n % 2 ? ranges[n / 2] : 0.5 * (ranges[n / 2 - 1] + ranges[n / 2]);
  return median > 0.0 ? mx / median : 0.0;
}

}  // namespace

double column_range_ratio(const Tensor2D& t) { return ratio_of(column_ranges(t)); }

RangeDiagnostic outlier_redistribution(const Tensor2D& x, const HadamardContext& ctx) {
  RangeDiagnostic d;
  d.pre_ranges = column_ranges(x);
  d.post_ranges = column_ranges(fht_rows(x, ctx));
  d.pre_ratio = ratio_of(d.pre_ranges);
  d.post_ratio = ratio_of(d.post_ranges);
  return d;
}

}  // namespace dvdq
