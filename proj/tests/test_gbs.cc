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
#include <limits>

#include <gtest/gtest.h>

#include "dvdq/error.h"
#include "dvdq/gbs.h"
#include "dvdq/random.h"

namespace dvdq {
namespace {

constexpr int L = 4, H = 8;

std::vector<int> replay(const std::vector<double>& inc, double delta) {
  return run_schedule(inc, delta, L, H).bits;
}

TEST(L1Rel, HandValues) {
  const Tensor2D prev(1, 2, {1.0f, 1.0f});
  EXPECT_EQ(l1_rel(prev, prev), 0.0);
  EXPECT_NEAR(l1_rel(Tensor2D(1, 2, {1.1f, 0.9f}), prev), 0.1, 1e-7);
  EXPECT_EQ(l1_rel(Tensor2D(1, 2), Tensor2D(1, 2)), 0.0);
  EXPECT_EQ(l1_rel(Tensor2D(1, 2, {0.0f, 1.0f}), Tensor2D(1, 2)),
            std::numeric_limits<double>::infinity());
  EXPECT_THROW(l1_rel(Tensor2D(1, 2), Tensor2D(2, 1)), ValidationError);
}

TEST(Gbs, Limits) {
  const std::vector<double> inc = {0.0, 0.3, 0.0, 1e-9, 5.0, 0.2};
  for (int b : replay(inc, 0.0)) EXPECT_EQ(b, H);
  for (int b : replay(inc, 1e9)) EXPECT_EQ(b, L);
  for (int b : replay(inc, std::numeric_limits<double>::infinity())) EXPECT_EQ(b, L);
}

TEST(Gbs, ConstantIncrementSchedule) {
  const std::vector<double> inc(10, 0.04);
  EXPECT_EQ(replay(inc, 0.1), (std::vector<int>{L, L, L, H, L, L, H, L, L, H}));
}

TEST(Gbs, LargeIncrementsSwitchEveryStep) {
  EXPECT_EQ(replay({1, 1, 1}, 0.5), (std::vector<int>{L, H, H}));
  const BitSchedule z = run_schedule(std::vector<double>(7, 0.0), 0.2, L, H);
  EXPECT_EQ(z.average_bits(), double(L));
  EXPECT_EQ(z.count(H), 0u);
}

TEST(Gbs, TieGoesHigh) {
  EXPECT_EQ(replay({0.0, 0.5, 0.25, 0.25}, 0.5), (std::vector<int>{L, H, L, H}));
}

TEST(Gbs, RejectsBadIncrements) {
  EXPECT_THROW(run_schedule(std::vector<double>{0.0, -0.1}, 0.1, L, H), ValidationError);
  EXPECT_THROW(run_schedule(std::vector<double>{0.0, NAN}, 0.1, L, H), ValidationError);
  EXPECT_THROW(GbsScheduler(0.1, 8, 4), ValidationError);
  EXPECT_THROW(GbsScheduler(-1.0, 4, 8), ValidationError);
}

TEST(Gbs, OpenLoopMonotoneInDelta) {
  Rng rng(5);
  for (int seq = 0; seq < 20; ++seq) {
    std::vector<double> inc(50);
    for (auto& v : inc) v = rng.uniform() * 0.2;
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (int k = 0; k < 50; ++k) {
      const double delta = 0.02 * k;
      const std::size_t highs = run_schedule(inc, delta, L, H).count(H);
      EXPECT_LE(highs, prev);
      prev = highs;
    }
  }
}

TEST(Gbs, ResetSnapshotAndLog) {
  GbsScheduler s(0.1, L, H);
  std::vector<double> inc = {0.0, 0.06, 0.06, 0.01, 0.2};
  for (double v : inc) {
    const int bit = s.decide_increment(v);
    if (bit == H) {
      EXPECT_EQ(s.cumulative(), 0.0);
    }
    EXPECT_GE(s.cumulative(), 0.0);
  }
  EXPECT_EQ(s.steps(), inc.size());
  EXPECT_EQ(s.schedule().bits, (std::vector<int>{L, L, H, L, H}));
  EXPECT_EQ(s.last_reset(), 4u);
  const auto& log = s.decisions();
  EXPECT_NEAR(log[2].cumulative, 0.12, 1e-12);
  EXPECT_EQ(log[0].increment, 0.0);
}

TEST(Gbs, LiveFeaturesReplayIdentically) {
  GbsScheduler live(0.15, L, H);
  std::vector<double> inc = {0.0};
  Tensor2D prev;
  for (int t = 0; t < 30; ++t) {
    const Tensor2D f = gaussian_tensor(t, 4, 8, 1.0f, 0.1f + 0.01f * float(t % 5));
    live.decide(f);
    if (t > 0) inc.push_back(l1_rel(f, prev));
    prev = f;
  }
  const BitSchedule replayed = run_schedule(inc, 0.15, L, H);
  EXPECT_EQ(live.schedule().bits, replayed.bits);
  for (std::size_t i = 1; i < inc.size(); ++i)
    EXPECT_EQ(live.decisions()[i].increment, inc[i]);
  EXPECT_THROW(live.decide(Tensor2D(2, 2)), ValidationError);
}

TEST(Gbs, CsvFormat) {
  const BitSchedule s = run_schedule(std::vector<double>{0.0, 0.5}, 0.25, L, H);
  EXPECT_EQ(s.to_csv(), "step,bit,increment,cumulative\n0,4,0,0\n1,8,0.5,0.5\n");
}

}  // namespace
}  // namespace dvdq
