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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dvdq/tensor.h"

namespace dvdq {

/// Normalized L1 drift ||curr - prev||_1 / ||prev||_1. When ||prev||_1 is 0
/// the result is 0 if curr is also all-zero and +infinity otherwise.
double l1_rel(const Tensor2D& curr, const Tensor2D& prev);

struct GbsDecision {
  std::size_t step = 0;
  int bit = 0;
  double increment = 0.0;   // drift added at this step (0 on the first step)
  double cumulative = 0.0;  // sum compared against the threshold, before any reset
};

struct BitSchedule {
  std::vector<int> bits;
  std::vector<GbsDecision> log;  // empty for schedules not produced by a scheduler

  double average_bits() const;
  std::size_t count(int bit) const;

  /// "step,bit,increment,cumulative" rows. Schedules without a log report
  /// zero increments and cumulative values.
  std::string to_csv() const;
};

/// Threshold-driven two-level bit switching over denoising steps.
///
/// Each step after the first adds the drift between the current and previous
/// step outputs to a running sum before comparing it with the threshold:
/// below the threshold selects the low bit-width; reaching it selects the
/// high bit-width and resets the sum to zero. The first step compares the
/// empty sum, so it runs at low precision iff threshold > 0.
///
/// Indexing note: diffusion samplers often count timesteps downward; here
/// "previous" always means the output of the step processed just before.
class GbsScheduler {
 public:
  GbsScheduler(double delta, int b_low, int b_high);

  /// Consumes the current step's output features and returns the bit-width
  /// for this step. Throws ValidationError if the feature shape changes.
  int decide(const Tensor2D& features);

  /// Same recurrence driven by a precomputed drift value. `increment` is
  /// ignored on the first step.
  int decide_increment(double increment);

  double delta() const { return delta_; }
  int b_low() const { return b_low_; }
  int b_high() const { return b_high_; }
  std::size_t last_reset() const { return last_reset_; }
  double cumulative() const { return cumulative_; }
  std::size_t steps() const { return log_.size(); }
  const std::vector<GbsDecision>& decisions() const { return log_; }

  BitSchedule schedule() const;

 private:
  int step_with(std::optional<double> increment);

  double delta_;
  int b_low_;
  int b_high_;
  std::size_t last_reset_ = 0;
  double cumulative_ = 0.0;
  std::optional<Tensor2D> prev_;
  std::vector<GbsDecision> log_;
};

/// Open-loop replay: increments[i] is the drift observed entering step i.
/// increments[0] is ignored because the first step has no predecessor.
/// Throws ValidationError on negative or NaN increments.
BitSchedule run_schedule(std::span<const double> increments, double delta, int b_low, int b_high);

}  // namespace dvdq
