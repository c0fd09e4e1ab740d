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
#include <cstdlib>

#include <gtest/gtest.h>

#include "dvdq/error.h"
#include "dvdq/pbq.h"
#include "dvdq/random.h"
#include "test_util.h"

namespace dvdq {
namespace {

using testing::oracle_code;
using testing::oracle_dequant;

// Squared reconstruction error of one channel at fixed bounds, from the
// scalar oracle in test_util.h.
double channel_error(std::span<const float> w, float a, float b, int bits) {
  double err = 0.0;
  for (float x : w) {
    const double d = double(oracle_dequant(oracle_code(x, a, b, bits), a, b, bits)) - x;
    err += d * d;
  }
  return err;
}

std::vector<float> channel_with_outlier(std::uint64_t seed) {
  const Tensor2D base = gaussian_tensor(seed, 1, 1023, 0.0f, 1.0f);
  std::vector<float> w(base.data().begin(), base.data().end());
  w.push_back(30.0f);
  return w;
}

TEST(Pbq, ConstantAndSingletonChannels) {
  const std::vector<float> c(17, 2.5f);
  const auto r = pbq_search_channel(c, PbqConfig{});
  EXPECT_EQ(r.best_error, 0.0);
  EXPECT_EQ(r.best_step_index, 0);
  EXPECT_EQ(r.best_alpha, 2.5f);
  EXPECT_EQ(r.best_beta, 2.5f);
  const auto o = pbq_oracle_channel(c, PbqConfig{});
  EXPECT_EQ(o.best_error, 0.0);

  const std::vector<float> one = {-3.25f};
  const auto s = pbq_search_channel(one, PbqConfig{});
  EXPECT_EQ(s.best_error, 0.0);
  EXPECT_EQ(s.best_alpha, -3.25f);
  PbqConfig cfg;
  const PbqResult q = pbq_quantize(Tensor2D(1, 1, {-3.25f}), cfg);
  EXPECT_EQ(q.report.mse, 0.0);
}

TEST(Pbq, OutlierIsClippedAway) {
  const auto w = channel_with_outlier(1);
  PbqConfig cfg;
  cfg.bits = 4;
  cfg.steps = 100;
  const auto r = pbq_search_channel(w, cfg);
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  const double eps0 = channel_error(w, *lo, *hi, 4);
  EXPECT_GT(r.best_step_index, 0);
  EXPECT_LT(r.best_error, eps0);

  // Exhaustive evaluation of every candidate on the shared grid.
  const double shrink = (double(*hi) - double(*lo)) / (2.0 * 101);
  double best = -1;
  int best_t = -1;
  for (int t = 0; t <= 100; ++t) {
    const float a = float(double(*lo) + t * shrink), b = float(double(*hi) - t * shrink);
    const double e = channel_error(w, a, b, 4);
    if (best < 0 || e < best) best = e, best_t = t;
  }
  EXPECT_EQ(r.best_step_index, best_t);
  EXPECT_NEAR(r.best_error, best, 1e-9 * best);
}

TEST(Pbq, ZeroStepsEqualsMinMaxBitwise) {
  const Tensor2D w = gaussian_tensor(4, 32, 96, 0.0f, 0.02f, 0.01, 30.0f);
  PbqConfig cfg;
  cfg.steps = 0;
  const PbqResult r = pbq_quantize(w, cfg);
  const QuantizedTensor mm = quantize(w, minmax_params(w, cfg.bits));
  EXPECT_TRUE(r.quantized == mm);
  EXPECT_TRUE(dequantize(r.quantized).bitwise_equal(dequantize(mm)));
}

TEST(Pbq, DominatesMinMaxPerChannel) {
  const Tensor2D w = gaussian_tensor(5, 128, 128, 0.0f, 1.0f);
  PbqConfig cfg;
  const PbqResult r = pbq_quantize(w, cfg);
  const QuantParams mm = minmax_params(w, 4);
  for (std::size_t c = 0; c < 128; ++c) {
    const double e_mm = channel_error(w.row(c), mm.channels[c].alpha, mm.channels[c].beta, 4);
    EXPECT_LE(r.channels[c].best_error, e_mm * (1 + 1e-12)) << "channel " << c;
  }
}

TEST(Pbq, MonotoneInSteps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = channel_with_outlier(seed + 50);
    double prev = INFINITY;
    for (int k : {0, 1, 5, 10, 25, 50, 100}) {
      PbqConfig cfg;
      cfg.steps = k;
      const double e = pbq_search_channel(w, cfg).best_error;
      EXPECT_LE(e, prev) << "K=" << k;
      prev = e;
    }
  }
}

TEST(Pbq, OracleAgreementOnFuzzedChannels) {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const int bits = (i % 3 == 0) ? 3 : (i % 3 == 1) ? 4 : 8;
    const std::size_t n = 1 + rng.below(300);
    const double frac = rng.uniform() < 0.5 ? 0.0 : 0.02;
    const Tensor2D t = gaussian_tensor(1000 + i, 1, n, float(rng.normal()), 0.5f, frac, 25.0f);
    PbqConfig cfg;
    cfg.bits = bits;
    cfg.steps = (i % 2) ? 10 : 100;
    const auto fast = pbq_search_channel(t.row(0), cfg);
    const auto slow = pbq_oracle_channel(t.row(0), cfg);
    ASSERT_EQ(fast.best_step_index, slow.best_step_index) << "case " << i;
    ASSERT_NEAR(fast.best_error, slow.best_error, 1e-9 * std::max(slow.best_error, 1e-300));
  }
}

TEST(Pbq, StepsBeyondGridWidenIt) {
  PbqConfig cfg;
  cfg.steps = 250;
  EXPECT_EQ(cfg.effective_grid(), 250);
  const auto w = channel_with_outlier(3);
  const auto r = pbq_search_channel(w, cfg);
  const auto o = pbq_oracle_channel(w, cfg);
  EXPECT_EQ(r.best_step_index, o.best_step_index);
  cfg.steps = -1;
  EXPECT_THROW(pbq_search_channel(w, cfg), ValidationError);
}

TEST(Pbq, ColumnAxis) {
  const Tensor2D w = gaussian_tensor(6, 40, 12, 0.0f, 1.0f, 0.02, 20.0f);
  PbqConfig cfg;
  cfg.axis = ChannelAxis::Col;
  const PbqResult r = pbq_quantize(w, cfg);
  ASSERT_EQ(r.channels.size(), 12u);
  const auto col = w.column(3);
  EXPECT_EQ(r.channels[3].best_step_index, pbq_search_channel(col, cfg).best_step_index);
}

TEST(Pbq, DeterministicAcrossThreadCounts) {
  const Tensor2D w = gaussian_tensor(9, 97, 200, 0.0f, 0.02f, 0.003, 30.0f);
  PbqConfig cfg;
  setenv("DVDQ_THREADS", "1", 1);
  const PbqResult one = pbq_quantize(w, cfg);
  setenv("DVDQ_THREADS", "5", 1);
  const PbqResult five = pbq_quantize(w, cfg);
  unsetenv("DVDQ_THREADS");
  EXPECT_TRUE(one.quantized == five.quantized);
  EXPECT_EQ(one.report.mse, five.report.mse);
}

TEST(Pbq, ErrorStdReductionOnOutlierWeights) {
  const Tensor2D w = gaussian_tensor(2, 1024, 1024, 0.0f, 0.02f, 0.003, 30.0f);
  const PbqResult r = pbq_quantize(w, PbqConfig{});
  const ErrorReport mm = error_report(w, fake_quantize(w, 4));
  EXPECT_LE(r.report.err_std / mm.err_std, 0.7);
}

}  // namespace
}  // namespace dvdq
