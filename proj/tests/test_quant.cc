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

#include <gtest/gtest.h>

#include "dvdq/error.h"
#include "dvdq/quant.h"
#include "dvdq/random.h"
#include "test_util.h"

namespace dvdq {
namespace {

using testing::oracle_code;
using testing::oracle_dequant;

QuantParams bounds(int bits, float alpha, float beta, std::size_t channels = 1) {
  QuantParams p;
  p.bits = bits;
  p.channels.assign(channels, {alpha, beta});
  return p;
}

TEST(MinMax, LatticeChannel) {
  const Tensor2D t(1, 4, {0, 1, 2, 3});
  const QuantParams p = minmax_params(t, 2);
  EXPECT_EQ(p.channels[0].alpha, 0.0f);
  EXPECT_EQ(p.channels[0].beta, 3.0f);
  EXPECT_DOUBLE_EQ(p.step(0), 1.0);
  const Tensor2D back = dequantize(quantize(t, p));
  EXPECT_TRUE(back.bitwise_equal(t));
}

TEST(MinMax, ConstantChannelIsDegenerate) {
  const Tensor2D t(1, 3, {5, 5, 5});
  const QuantParams p = minmax_params(t, 4);
  EXPECT_TRUE(p.degenerate(0));
  const QuantizedTensor q = quantize(t, p);
  for (auto c : q.codes) EXPECT_EQ(c, 0);
  const Tensor2D back = dequantize(q);
  for (float v : back.data()) EXPECT_EQ(v, 5.0f);
}

TEST(MinMax, MatchesDirectScanPerAxis) {
  const Tensor2D t = gaussian_tensor(5, 9, 31, 0.0f, 1.0f);
  const QuantParams rows = minmax_params(t, 4, ChannelAxis::Row);
  const QuantParams cols = minmax_params(t, 4, ChannelAxis::Col);
  ASSERT_EQ(rows.channels.size(), 9u);
  ASSERT_EQ(cols.channels.size(), 31u);
  for (std::size_t r = 0; r < 9; ++r) {
    float lo = t(r, 0), hi = t(r, 0);
    for (std::size_t c = 0; c < 31; ++c) lo = std::min(lo, t(r, c)), hi = std::max(hi, t(r, c));
    EXPECT_EQ(rows.channels[r].alpha, lo);
    EXPECT_EQ(rows.channels[r].beta, hi);
  }
  for (std::size_t c = 0; c < 31; ++c) {
    float lo = t(0, c), hi = t(0, c);
    for (std::size_t r = 0; r < 9; ++r) lo = std::min(lo, t(r, c)), hi = std::max(hi, t(r, c));
    EXPECT_EQ(cols.channels[c].alpha, lo);
    EXPECT_EQ(cols.channels[c].beta, hi);
  }
}

TEST(MinMax, EmptyTensorRejected) { EXPECT_THROW(minmax_params(Tensor2D(), 4), ValidationError); }

TEST(Quantize, EndpointsClampAndMidpoint) {
  const QuantParams p = bounds(4, -1.0f, 1.0f);
  const Tensor2D t(1, 5, {-1.0f, 1.0f, -7.0f, 9.0f, 0.0f});
  const QuantizedTensor q = quantize(t, p);
  EXPECT_EQ(q.codes[0], 0);
  EXPECT_EQ(q.codes[1], 15);
  EXPECT_EQ(q.codes[2], 0);
  EXPECT_EQ(q.codes[3], 15);
  EXPECT_EQ(q.codes[4], 8);  // 0.5 * 15 = 7.5 rounds away from zero
}

TEST(Quantize, ChannelCountMismatch) {
  const Tensor2D t(3, 2);
  EXPECT_THROW(quantize(t, bounds(4, 0, 1, 2)), ValidationError);
}

TEST(Quantize, HalfStepBoundSweep) {
  for (int bits : {2, 3, 4, 6, 8}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Tensor2D t = gaussian_tensor(seed, 8, 64, 0.0f, 1.0f, 0.02, 20.0f);
      // Bounds narrower than the data so clamping is exercised too.
      QuantParams p = minmax_params(t, bits);
      for (auto& ch : p.channels) {
        ch.alpha *= 0.5f;
        ch.beta *= 0.5f;
      }
      const QuantizedTensor q = quantize(t, p);
      const Tensor2D back = dequantize(q);
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto& ch = p.channels[r];
        const double step = p.step(r);
        for (std::size_t c = 0; c < t.cols(); ++c) {
          ASSERT_LT(q.codes[r * t.cols() + c], 1u << bits);
          const double clamped = std::clamp(double(t(r, c)), double(ch.alpha), double(ch.beta));
          ASSERT_LE(std::fabs(back(r, c) - clamped),
                    step / 2 + 1e-6 * (double(ch.beta) - double(ch.alpha)));
        }
      }
    }
  }
}

TEST(Quantize, AgreesWithScalarOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Tensor2D t = gaussian_tensor(100 + seed, 16, 48, 0.3f, 2.0f);
    const QuantParams p = minmax_params(t, 4);
    const QuantizedTensor q = quantize(t, p);
    const Tensor2D fq = fake_quantize(t, 4);
    for (std::size_t r = 0; r < t.rows(); ++r)
      for (std::size_t c = 0; c < t.cols(); ++c) {
        const auto& ch = p.channels[r];
        const int code = oracle_code(t(r, c), ch.alpha, ch.beta, 4);
        ASSERT_EQ(q.codes[r * t.cols() + c], code);
        ASSERT_EQ(fq(r, c), oracle_dequant(code, ch.alpha, ch.beta, 4));
      }
  }
}

TEST(FakeQuantize, EightBitLatticeIsIdentity) {
  std::vector<float> v(256);
  for (int i = 0; i < 256; ++i) v[i] = float(i) - 128.0f;
  const Tensor2D t(1, 256, v);
  EXPECT_TRUE(fake_quantize(t, 8).bitwise_equal(t));
}

TEST(FakeQuantize, IdempotentUnderSameParams) {
  const Tensor2D t = gaussian_tensor(8, 12, 40, 0.0f, 1.0f);
  const QuantParams p = minmax_params(t, 3);
  const Tensor2D once = dequantize(quantize(t, p));
  const Tensor2D twice = dequantize(quantize(once, p));
  EXPECT_TRUE(once.bitwise_equal(twice));
}

TEST(FakeQuantize, PerTensorUsesGlobalRange) {
  const Tensor2D t(2, 2, {0.0f, 1.0f, 2.0f, 3.0f});
  const Tensor2D fq = fake_quantize_per_tensor(t, 2);
  EXPECT_TRUE(fq.bitwise_equal(t));
}

TEST(SmoothQuant, ExponentEndpointsAndHandValue) {
  const Tensor2D x(2, 3, {4.0f, -2.0f, 0.0f, 1.0f, 0.5f, 0.0f});
  const Tensor2D w(1, 3, {1.0f, -0.25f, 3.0f});
  const auto s1 = smoothquant_scales(x, w, 1.0f);
  EXPECT_FLOAT_EQ(s1[0], 4.0f);
  EXPECT_FLOAT_EQ(s1[1], 2.0f);
  const auto s0 = smoothquant_scales(x, w, 0.0f);
  EXPECT_FLOAT_EQ(s0[0], 1.0f);
  EXPECT_FLOAT_EQ(s0[1], 4.0f);
  const auto sh = smoothquant_scales(x, w, 0.5f);
  EXPECT_FLOAT_EQ(sh[0], 2.0f);
  // All-zero activation column falls back to 1.
  EXPECT_EQ(sh[2], 1.0f);
  EXPECT_THROW(smoothquant_scales(x, w, 1.5f), ValidationError);
}

TEST(ErrorReport, HandArithmetic) {
  const Tensor2D a(1, 2, {0.0f, 0.0f});
  const Tensor2D b(1, 2, {1.0f, -1.0f});
  const ErrorReport r = error_report(a, b);
  EXPECT_DOUBLE_EQ(r.err_mean, 0.0);
  EXPECT_DOUBLE_EQ(r.err_std, 1.0);
  EXPECT_DOUBLE_EQ(r.mse, 1.0);
  EXPECT_DOUBLE_EQ(r.max_abs, 1.0);

  const ErrorReport z = error_report(a, a);
  EXPECT_EQ(z.mse, 0.0);
  EXPECT_EQ(z.max_abs, 0.0);
  EXPECT_EQ(z.err_std, 0.0);

  EXPECT_THROW(error_report(a, Tensor2D(2, 1)), ValidationError);
}

TEST(ErrorReport, MseMatchesNaiveLoop) {
  const Tensor2D t = gaussian_tensor(21, 64, 64, 0.0f, 0.02f, 0.003, 30.0f);
  const Tensor2D fq = fake_quantize(t, 4);
  const ErrorReport r = error_report(t, fq);
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = double(fq.data()[i]) - double(t.data()[i]);
    sum += e * e;
  }
  EXPECT_NEAR(r.mse, sum / double(t.size()), 1e-9 * r.mse);
  ASSERT_EQ(r.per_channel_mse.size(), 64u);
  double mean_ch = 0.0;
  for (double m : r.per_channel_mse) mean_ch += m;
  EXPECT_NEAR(mean_ch / 64.0, r.mse, 1e-9 * r.mse);
}

TEST(ErrorReport, JsonAndCsv) {
  const ErrorReport r = error_report(Tensor2D(1, 2, {0, 0}), Tensor2D(1, 2, {0.5f, -0.25f}));
  const ErrorReport back = ErrorReport::from_json(r.to_json());
  EXPECT_EQ(back.mse, r.mse);
  EXPECT_EQ(back.err_std, r.err_std);
  EXPECT_EQ(back.per_channel_mse, r.per_channel_mse);
  EXPECT_EQ(ErrorReport::csv_header(), "mse,max_abs,err_mean,err_std,channels");
  EXPECT_EQ(r.csv_row(), "0.15625,0.5,0.125,0.375,1");
}

TEST(ErrorHistogram, CountsAndEdgeBins) {
  const Tensor2D a(1, 4, {0, 0, 0, 0});
  const Tensor2D b(1, 4, {-0.9f, 0.1f, 5.0f, -5.0f});
  const auto h = error_histogram(a, b, -1.0, 1.0, 4);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0], 2u);  // -0.9 and clamped -5
  EXPECT_EQ(h[2], 1u);
  EXPECT_EQ(h[3], 1u);  // clamped 5
}

}  // namespace
}  // namespace dvdq
