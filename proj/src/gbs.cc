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

#include "dvdq/gbs.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "dvdq/error.h"

namespace dvdq {

double l1_rel(const Tensor2D& curr, const Tensor2D& prev) {
  require_same_shape(curr, prev, "l1_rel");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < curr.size(); ++i) {
    num += std::fabs(double(curr.data()[i]) - double(prev.data()[i]));
    den += std::fabs(double(prev.data()[i]));
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double BitSchedule::average_bits() const {
  if (bits.empty()) return 0.0;
  return std::accumulate(bits.begin(), bits.end(), 0.0) / double(bits.size());
}

std::size_t BitSchedule::count(int bit) const {
  return std::size_t(std::count(bits.begin(), bits.end(), bit));
}

std::string BitSchedule::to_csv() const {
  std::string out = "step,bit,increment,cumulative\n";
  char buf[128];
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double inc = i < log.size() ? log[i].increment : 0.0;
    const double cum = i < log.size() ? log[i].cumulative : 0.0;
    std::snprintf(buf, sizeof buf, "%zu,%d,%.9g,%.9g\n", i, bits[i], inc, cum);
    out += buf;
  }
  return out;
}

GbsScheduler::GbsScheduler(double delta, int b_low, int b_high)
    : delta_(delta), b_low_(b_low), b_high_(b_high) {
  if (!(delta >= 0.0)) throw ValidationError("gbs: threshold must be non-negative");
  if (!(b_low < b_high)) throw ValidationError("gbs: b_low must be below b_high");
}

int GbsScheduler::decide(const Tensor2D& features) {
  std::optional<double> inc;
  if (prev_) {
    if (prev_->rows() != features.rows() || prev_->cols() != features.cols())
      throw ValidationError("gbs: feature shape changed mid-run");
    inc = l1_rel(features, *prev_);
  }
  const int bit = step_with(inc);
  prev_ = features;
  return bit;
}

int GbsScheduler::decide_increment(double increment) {
  if (!(increment >= 0.0)) throw ValidationError("gbs: increments must be non-negative");
  return step_with(log_.empty() ? std::nullopt : std::optional<double>(increment));
}

int GbsScheduler::step_with(std::optional<double> increment) {
  GbsDecision d;
  d.step = log_.size();
  d.increment = increment.value_or(0.0);
  if (increment) cumulative_ += *increment;
  d.cumulative = cumulative_;
  if (cumulative_ < delta_) {
    d.bit = b_low_;
  } else {
    d.bit = b_high_;
    cumulative_ = 0.0;
    last_reset_ = d.step;
  }
  log_.push_back(d);
  return d.bit;
}

BitSchedule GbsScheduler::schedule() const {
  BitSchedule s;
  s.log = log_;
  s.bits.reserve(log_.size());
  for (const auto& d : log_) s.bits.push_back(d.bit);
  return s;
}

BitSchedule run_schedule(std::span<const double> increments, double delta, int b_low, int b_high) {
  for (double v : increments)
    if (!(v >= 0.0)) throw ValidationError("run_schedule: increments must be non-negative");
  GbsScheduler g(delta, b_low, b_high);
  for (double v : increments) g.decide_increment(v);
  return g.schedule();
}

}  // namespace dvdq
