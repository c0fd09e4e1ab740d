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

#include "dvdq/pbq.h"

#include <algorithm>
#include <string>

#include "dvdq/error.h"
#include "dvdq/parallel.h"

namespace dvdq {

void PbqConfig::validate() const {
  if (bits < 2 || bits > 8) throw ValidationError("pbq: bits must lie in [2, 8]");
  if (steps < 0) throw ValidationError("pbq: steps must be non-negative");
  if (grid < 1) throw ValidationError("pbq: grid must be at least 1");
}

PbqChannelResult pbq_search_channel(std::span<const float> w, const PbqConfig& cfg) {
  cfg.validate();
  if (w.empty()) throw ValidationError("pbq_search_channel: empty channel");

  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  const float alpha0 = *lo;
  const float beta0 = *hi;
  PbqChannelResult best{alpha0, beta0, 0.0, 0};
  if (!(alpha0 < beta0)) return best;

  const int qmax = (1 << cfg.bits) - 1;
  const double shrink = (double(beta0) - double(alpha0)) / (2.0 * (cfg.effective_grid() + 1));

  bool have = false;
  for (int t = 0; t <= cfg.steps; ++t) {
    const float a = static_cast<float>(double(alpha0) + t * shrink);
    const float b = static_cast<float>(double(beta0) - t * shrink);
    if (!(a < b)) break;
    double err = 0.0;
    for (float x : w) {
      const float r = dequantize_value(quantize_value(x, a, b, qmax), a, b, qmax);
      const double d = double(r) - double(x);
      err += d * d;
    }
    if (!have || err < best.best_error) {
      best = {a, b, err, t};
      have = true;
    }
  }
  return best;
}

PbqResult pbq_quantize(const Tensor2D& w, const PbqConfig& cfg) {
  cfg.validate();
  if (w.empty()) throw ValidationError("pbq_quantize: empty tensor");
  const std::size_t nch = channel_count(w, cfg.axis);
  PbqResult out;
  out.channels.resize(nch);
  parallel_for(nch, [&](std::size_t ch) {
    if (cfg.axis == ChannelAxis::Row) {
      out.channels[ch] = pbq_search_channel(w.row(ch), cfg);
    } else {
      const auto col = w.column(ch);
      out.channels[ch] = pbq_search_channel(col, cfg);
    }
  });

  QuantParams p;
  p.bits = cfg.bits;
  p.channels.reserve(nch);
  for (const auto& c : out.channels) p.channels.push_back({c.best_alpha, c.best_beta});
  out.quantized = quantize(w, p, cfg.axis);
  out.report = error_report(w, dequantize(out.quantized), cfg.axis);
  return out;
}

}  // namespace dvdq
