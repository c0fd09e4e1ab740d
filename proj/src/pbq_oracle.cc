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

#include <cmath>

#include "dvdq/error.h"
#include "dvdq/pbq.h"

namespace dvdq {

// Deliberately naive: plain loops, division by the step, floor(v + 0.5) for
// rounding (equal to half-away-from-zero on non-negative v). Only the
// candidate grid and the float32 rounding of reconstructed values are part of
// the shared contract.
PbqChannelResult pbq_oracle_channel(std::span<const float> w, const PbqConfig& cfg) {
  if (w.empty()) throw ValidationError("pbq_oracle_channel: empty channel");
  float lo = w[0], hi = w[0];
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] < lo) lo = w[i];
    if (w[i] > hi) hi = w[i];
  }
  PbqChannelResult best;
  best.best_alpha = lo;
  best.best_beta = hi;
  best.best_error = 0.0;
  best.best_step_index = 0;
  if (lo == hi) return best;

  const int levels = (1 << cfg.bits) - 1;
  const int grid = cfg.steps > cfg.grid ? cfg.steps : cfg.grid;
  const double delta = (double(hi) - double(lo)) / (2.0 * (grid + 1));

  double best_err = -1.0;
  for (int t = 0; t <= cfg.steps; ++t) {
    const float a = float(double(lo) + t * delta);
    const float b = float(double(hi) - t * delta);
    if (a >= b) break;
    const double step = (double(b) - double(a)) / levels;
    double err = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      double x = w[i];
      if (x < a) x = a;
      if (x > b) x = b;
      double code = std::floor((x - a) / step + 0.5);
      if (code < 0) code = 0;
      if (code > levels) code = levels;
      const float rec = float(double(a) + code * step);
      const double e = double(rec) - double(w[i]);
      err += e * e;
    }
    if (best_err < 0.0 || err < best_err) {
      best_err = err;
      best.best_alpha = a;
      best.best_beta = b;
      best.best_error = err;
      best.best_step_index = t;
    }
  }
  return best;
}

}  // namespace dvdq
