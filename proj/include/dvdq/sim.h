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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvdq/gbs.h"
#include "dvdq/quant.h"
#include "dvdq/tensor.h"

namespace dvdq::sim {

struct ModelConfig {
  std::size_t hidden = 256;  // power of two keeps the rotation a single block
  std::size_t depth = 4;
  double weight_gain = 0.7;  // weight std = gain / sqrt(hidden)
  double outlier_frac = 0.003;
  float outlier_scale = 30.0f;
  std::uint64_t seed = 0;
};

/// Frozen MLP net(u) = W_L sig(... sig(W_1 u)) with the logistic sigmoid
/// between layers; every layer is hidden x hidden with Gaussian weights.
struct ToyModel {
  ModelConfig config;
  std::vector<Tensor2D> layers;

  static ToyModel build(const ModelConfig& cfg);
};

enum class WeightMethod { None, MinMax, Pbq };
enum class ActivationMethod { None, MinMax, SmoothQuant, RotateOnly, Arq };
enum class SchedulerKind { Fixed, Gbs, Stp, Itp, Abs, Sba };

std::string to_string(WeightMethod m);
std::string to_string(ActivationMethod m);
std::string to_string(SchedulerKind k);
WeightMethod weight_method_from_string(const std::string& s);
ActivationMethod activation_method_from_string(const std::string& s);
SchedulerKind scheduler_from_string(const std::string& s);

struct SchedulerConfig {
  SchedulerKind kind = SchedulerKind::Fixed;
  int fixed_bits = 4;   // Fixed
  double delta = 0.0;   // Gbs
  std::uint64_t sba_seed = 0;
};

struct RunConfig {
  std::size_t steps = 50;
  WeightMethod weight_method = WeightMethod::Pbq;
  ActivationMethod activation_method = ActivationMethod::Arq;
  SchedulerConfig scheduler;
  int weight_bits = 4;
  int b_low = 4;
  int b_high = 8;
  int pbq_steps = 100;
  float smoothquant_alpha = 0.5f;
  std::uint64_t seed = 0;  // initial latent and activation outlier positions
  std::size_t tokens = 32;
  double eta = 0.1;
  double act_outlier_frac = 0.01;
  float act_outlier_scale = 5.0f;
  /// Per-step activation multiplier; empty means the default 10 -> 1 linear ramp.
  std::vector<double> scale_profile;

  std::vector<double> resolved_profile() const;
  void validate() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

/// Linear ramp from `first` down to `last` over `steps` entries.
std::vector<double> ramp_profile(std::size_t steps, double first = 10.0, double last = 1.0);

struct RunResult {
  double final_mse = 0.0;            // vs. the full-precision run of the same config
  std::vector<double> drift_trace;   // l1_rel(F_t, F_{t-1}) for t = 1..T-1
  BitSchedule schedule;              // activation bit-width per step
  double average_bits = 0.0;
  std::vector<ErrorReport> weight_reports;  // per layer, on the matrix actually quantized
  Tensor2D final_state;

  nlohmann::json to_json() const;
};

/// Full-precision trajectory: x_{t+1} = x_t - eta * net(x_t * scale_t).
RunResult run_full_precision(const ToyModel& model, const RunConfig& cfg);

/// Quantized trajectory compared against the full-precision one. Pass a
/// precomputed full-precision result to skip recomputing it.
RunResult run_denoise(const ToyModel& model, const RunConfig& cfg,
                      const RunResult* reference = nullptr);

/// STP, ITP, ABS and SBA schedules. For odd T the extra step goes to the
/// first half; SBA places exactly floor(T/2) high steps by seeded shuffle.
std::map<std::string, BitSchedule> baseline_schedules(std::size_t steps, int b_low, int b_high,
                                                      std::uint64_t seed);

/// Drift increments aligned with scheduler steps: the decision for step i
/// sees the drift between the outputs of steps i-1 and i-2.
std::vector<double> scheduler_increments(const std::vector<double>& drift_trace);

struct SweepRow {
  double delta = 0.0;
  double average_bits = 0.0;            // closed loop, from the quantized run
  double final_mse = 0.0;
  double open_loop_average_bits = 0.0;  // replayed on the full-precision drift
};

/// One GBS run per threshold (ascending). cfg.scheduler is overridden.
std::vector<SweepRow> delta_sweep(const ToyModel& model, const RunConfig& cfg,
                                  const std::vector<double>& deltas);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace dvdq::sim
