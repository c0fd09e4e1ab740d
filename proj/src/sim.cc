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

#include "dvdq/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dvdq/arq.h"
#include "dvdq/error.h"
#include "dvdq/hadamard.h"
#include "dvdq/pbq.h"
#include "dvdq/random.h"

namespace dvdq::sim {

using nlohmann::json;

namespace {

template <typename E, std::size_t N>
std::string enum_name(E v, const std::pair<E, const char*> (&names)[N]) {
  for (const auto& [e, n] : names)
    if (e == v) return n;
  return "?";
}

template <typename E, std::size_t N>
E enum_parse(const std::string& s, const std::pair<E, const char*> (&names)[N], const char* what) {
  for (const auto& [e, n] : names)
    if (s == n) return e;
  throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
}

constexpr std::pair<WeightMethod, const char*> kWeightNames[] = {
    {WeightMethod::None, "none"}, {WeightMethod::MinMax, "minmax"}, {WeightMethod::Pbq, "pbq"}};
constexpr std::pair<ActivationMethod, const char*> kActNames[] = {
    {ActivationMethod::None, "none"},
    {ActivationMethod::MinMax, "minmax"},
    {ActivationMethod::SmoothQuant, "smoothquant"},
    {ActivationMethod::RotateOnly, "rotate-only"},
    {ActivationMethod::Arq, "arq"}};
constexpr std::pair<SchedulerKind, const char*> kSchedNames[] = {
    {SchedulerKind::Fixed, "fixed"}, {SchedulerKind::Gbs, "gbs"}, {SchedulerKind::Stp, "stp"},
    {SchedulerKind::Itp, "itp"},     {SchedulerKind::Abs, "abs"}, {SchedulerKind::Sba, "sba"}};

// Distinct streams per purpose so changing one never shifts another.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return r.next();
}

// Logistic sigmoid. Its outputs have a positive mean, like the GELU/SiLU
// hidden activations of real transformer blocks, which concentrates energy in
// the first Hadamard column after rotation.
float activation(float v) { return 1.0f / (1.0f + std::exp(-v)); }

double mse_between(const Tensor2D& a, const Tensor2D& b) {
  const double f = frobenius_diff(a, b);
  return a.size() ? f * f / double(a.size()) : 0.0;
}

struct Trajectory {
  Tensor2D final_state;
  std::vector<double> drift;
  BitSchedule schedule;
  std::vector<std::vector<float>> act_absmax;  // per layer, per input column
};

class Runner {
 public:
  Runner(const ToyModel& model, const RunConfig& cfg, bool quantized,
         const std::vector<std::vector<float>>* calibration)
      : model_(model), cfg_(cfg), quantized_(quantized), ctx_(model.config.hidden) {
    if (!quantized_) return;
    const auto am = cfg_.activation_method;
    for (std::size_t l = 0; l < model_.layers.size(); ++l) {
      Tensor2D base = model_.layers[l];
      if (am == ActivationMethod::RotateOnly || am == ActivationMethod::Arq) {
        base = fht_rows(base, ctx_);
      } else if (am == ActivationMethod::SmoothQuant) {
        if (!calibration) throw ValidationError("smoothquant requires calibration maxima");
        smooth_.push_back(calibrated_scales((*calibration)[l], base, cfg_.smoothquant_alpha));
        base = scale_columns(base, smooth_.back(), /*divide=*/false);
      }
      Tensor2D w;
      switch (cfg_.weight_method) {
        case WeightMethod::None:
          w = base;
          break;
        case WeightMethod::MinMax:
          w = fake_quantize(base, cfg_.weight_bits, ChannelAxis::Row);
          break;
        case WeightMethod::Pbq: {
          PbqConfig pc;
          pc.bits = cfg_.weight_bits;
          pc.steps = cfg_.pbq_steps;
          w = dequantize(pbq_quantize(base, pc).quantized);
          break;
        }
      }
      reports_.push_back(error_report(base, w, ChannelAxis::Row));
      weights_.push_back(std::move(w));
    }
  }

  const std::vector<ErrorReport>& reports() const { return reports_; }

  Trajectory run() {
    const std::size_t T = cfg_.steps;
    const std::size_t d = model_.config.hidden;
    const auto profile = cfg_.resolved_profile();
    Trajectory out;
    out.act_absmax.assign(model_.layers.size(), std::vector<float>(d, 0.0f));

    Tensor2D x = gaussian_tensor(derive_seed(cfg_.seed, 1), cfg_.tokens, d, 0.0f, 1.0f);
    const auto outliers = outlier_positions();

    std::vector<int> planned;
    std::optional<GbsScheduler> gbs;
    if (cfg_.scheduler.kind == SchedulerKind::Gbs) {
      gbs.emplace(cfg_.scheduler.delta, cfg_.b_low, cfg_.b_high);
    } else if (cfg_.scheduler.kind == SchedulerKind::Fixed) {
      planned.assign(T, cfg_.scheduler.fixed_bits);
    } else {
      auto all = baseline_schedules(T, cfg_.b_low, cfg_.b_high, cfg_.scheduler.sba_seed);
      planned = all.at(to_string(cfg_.scheduler.kind)).bits;
    }

    Tensor2D prev_out;
    for (std::size_t t = 0; t < T; ++t) {
      int bits;
      if (gbs) {
        bits = t == 0 ? gbs->decide_increment(0.0) : gbs->decide(prev_out);
      } else {
        bits = planned[t];
      }
      out.schedule.bits.push_back(bits);

      Tensor2D h = x;
      for (float& v : h.data()) v = static_cast<float>(v * profile[t]);
      for (std::size_t p : outliers) h.data()[p] *= cfg_.act_outlier_scale;

      for (std::size_t l = 0; l < model_.layers.size(); ++l) {
        auto& mx = out.act_absmax[l];
        for (std::size_t r = 0; r < h.rows(); ++r)
          for (std::size_t c = 0; c < d; ++c) mx[c] = std::max(mx[c], std::fabs(h(r, c)));
        h = linear(l, h, bits);
        if (l + 1 < model_.layers.size())
          for (float& v : h.data()) v = activation(v);
      }

      if (t > 0) out.drift.push_back(l1_rel(h, prev_out));
      for (std::size_t i = 0; i < x.size(); ++i)
        x.data()[i] = static_cast<float>(double(x.data()[i]) - cfg_.eta * double(h.data()[i]));
      prev_out = std::move(h);
    }
    if (gbs) out.schedule = gbs->schedule();
    out.final_state = std::move(x);
    return out;
  }

 private:
  static std::vector<float> calibrated_scales(const std::vector<float>& xmax, const Tensor2D& w,
                                              float alpha) {
    // Same rule as smoothquant_scales, with the activation maxima taken from
    // an offline full-precision pass instead of the live batch.
    Tensor2D xm(1, xmax.size(), xmax);
    return smoothquant_scales(xm, w, alpha);
  }

  std::vector<std::size_t> outlier_positions() const {
    const std::size_t n = cfg_.tokens * model_.config.hidden;
    const auto k = static_cast<std::size_t>(std::floor(cfg_.act_outlier_frac * double(n)));
    if (k == 0) return {};
    Rng rng(derive_seed(cfg_.seed, 2));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  }

  Tensor2D linear(std::size_t l, const Tensor2D& u, int bits) const {
    if (!quantized_) return matmul_transposed(u, model_.layers[l]);
    const Tensor2D& w = weights_[l];
    switch (cfg_.activation_method) {
      case ActivationMethod::None:
        return matmul_transposed(u, w);
      case ActivationMethod::MinMax:
        return matmul_transposed(fake_quantize_per_tensor(u, bits), w);
      case ActivationMethod::SmoothQuant:
        return matmul_transposed(
            fake_quantize_per_tensor(scale_columns(u, smooth_[l], /*divide=*/true), bits), w);
      case ActivationMethod::RotateOnly:
        return matmul_transposed(fake_quantize_per_tensor(fht_rows(u, ctx_), bits), w);
      case ActivationMethod::Arq:
        return matmul_transposed(
            arq_reconstruct_activation(arq_quantize_activation(u, ctx_, bits)), w);
    }
    throw ValidationError("unknown activation method");
  }

  const ToyModel& model_;
  const RunConfig& cfg_;
  bool quantized_;
  HadamardContext ctx_;
  std::vector<Tensor2D> weights_;
  std::vector<std::vector<float>> smooth_;
  std::vector<ErrorReport> reports_;
};

RunResult to_result(Trajectory&& tr) {
  RunResult r;
  r.drift_trace = std::move(tr.drift);
  r.schedule = std::move(tr.schedule);
  r.average_bits = r.schedule.average_bits();
  r.final_state = std::move(tr.final_state);
  return r;
}

}  // namespace

std::string to_string(WeightMethod m) { return enum_name(m, kWeightNames); }
std::string to_string(ActivationMethod m) { return enum_name(m, kActNames); }
std::string to_string(SchedulerKind k) { return enum_name(k, kSchedNames); }
WeightMethod weight_method_from_string(const std::string& s) {
  return enum_parse(s, kWeightNames, "weight method");
}
ActivationMethod activation_method_from_string(const std::string& s) {
  return enum_parse(s, kActNames, "activation method");
}
SchedulerKind scheduler_from_string(const std::string& s) {
  return enum_parse(s, kSchedNames, "scheduler");
}

ToyModel ToyModel::build(const ModelConfig& cfg) {
  if (cfg.hidden == 0 || cfg.depth == 0) throw ValidationError("toy model needs hidden > 0 and depth > 0");
  ToyModel m;
  m.config = cfg;
  const float std = static_cast<float>(cfg.weight_gain / std::sqrt(double(cfg.hidden)));
  for (std::size_t l = 0; l < cfg.depth; ++l) {
    m.layers.push_back(gaussian_tensor(derive_seed(cfg.seed, 100 + l), cfg.hidden, cfg.hidden, 0.0f,
                                       std, cfg.outlier_frac, cfg.outlier_scale));
  }
  return m;
}

std::vector<double> ramp_profile(std::size_t steps, double first, double last) {
  std::vector<double> p(steps, first);
  for (std::size_t t = 0; steps > 1 && t < steps; ++t)
    p[t] = first + (last - first) * double(t) / double(steps - 1);
  return p;
}

std::vector<double> RunConfig::resolved_profile() const {
  return scale_profile.empty() ? ramp_profile(steps) : scale_profile;
}

void RunConfig::validate() const {
  if (steps < 1) throw ValidationError("run config: steps must be at least 1");
  if (!scale_profile.empty() && scale_profile.size() != steps)
    throw ValidationError("run config: scale profile length " + std::to_string(scale_profile.size()) +
                          " does not match steps " + std::to_string(steps));
  if (!(b_low < b_high) || b_low < 2 || b_high > 8)
    throw ValidationError("run config: need 2 <= b_low < b_high <= 8");
  if (weight_bits < 2 || weight_bits > 8) throw ValidationError("run config: weight bits out of range");
  if (scheduler.kind == SchedulerKind::Fixed && (scheduler.fixed_bits < 2 || scheduler.fixed_bits > 8))
    throw ValidationError("run config: fixed bits out of range");
  if (scheduler.kind == SchedulerKind::Gbs && !(scheduler.delta >= 0.0))
    throw ValidationError("run config: gbs threshold must be non-negative");
  if (tokens == 0) throw ValidationError("run config: tokens must be positive");
  if (!(act_outlier_frac >= 0.0 && act_outlier_frac <= 1.0))
    throw ValidationError("run config: act_outlier_frac must lie in [0, 1]");
}

json RunConfig::to_json() const {
  json j;
  j["steps"] = steps;
  j["weight_method"] = to_string(weight_method);
  j["activation_method"] = to_string(activation_method);
  j["scheduler"] = {{"kind", to_string(scheduler.kind)},
                    {"fixed_bits", scheduler.fixed_bits},
                    {"delta", scheduler.delta},
                    {"sba_seed", scheduler.sba_seed}};
  j["weight_bits"] = weight_bits;
  j["b_low"] = b_low;
  j["b_high"] = b_high;
  j["pbq_steps"] = pbq_steps;
  j["smoothquant_alpha"] = smoothquant_alpha;
  j["seed"] = seed;
  j["tokens"] = tokens;
  j["eta"] = eta;
  j["act_outlier_frac"] = act_outlier_frac;
  j["act_outlier_scale"] = act_outlier_scale;
  j["scale_profile"] = scale_profile;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.steps = j.value("steps", c.steps);
  if (j.contains("weight_method")) c.weight_method = weight_method_from_string(j["weight_method"]);
  if (j.contains("activation_method"))
    c.activation_method = activation_method_from_string(j["activation_method"]);
  if (j.contains("scheduler")) {
    const auto& s = j["scheduler"];
    if (s.contains("kind")) c.scheduler.kind = scheduler_from_string(s["kind"]);
    c.scheduler.fixed_bits = s.value("fixed_bits", c.scheduler.fixed_bits);
    c.scheduler.delta = s.value("delta", c.scheduler.delta);
    c.scheduler.sba_seed = s.value("sba_seed", c.scheduler.sba_seed);
  }
  c.weight_bits = j.value("weight_bits", c.weight_bits);
  c.b_low = j.value("b_low", c.b_low);
  c.b_high = j.value("b_high", c.b_high);
  c.pbq_steps = j.value("pbq_steps", c.pbq_steps);
  c.smoothquant_alpha = j.value("smoothquant_alpha", c.smoothquant_alpha);
  c.seed = j.value("seed", c.seed);
  c.tokens = j.value("tokens", c.tokens);
  c.eta = j.value("eta", c.eta);
  c.act_outlier_frac = j.value("act_outlier_frac", c.act_outlier_frac);
  c.act_outlier_scale = j.value("act_outlier_scale", c.act_outlier_scale);
  c.scale_profile = j.value("scale_profile", c.scale_profile);
  c.validate();
  return c;
}

json RunResult::to_json() const {
  json j;
  j["final_mse"] = final_mse;
  j["average_bits"] = average_bits;
  j["drift_trace"] = drift_trace;
  j["bits"] = schedule.bits;
  j["weight_reports"] = json::array();
  for (const auto& r : weight_reports) j["weight_reports"].push_back(r.to_json());
  return j;
}

RunResult run_full_precision(const ToyModel& model, const RunConfig& cfg) {
  cfg.validate();
  Runner runner(model, cfg, /*quantized=*/false, nullptr);
  return to_result(runner.run());
}

namespace {

// Full-precision pass that also keeps the per-layer activation maxima used to
// calibrate the smoothing baseline.
std::pair<RunResult, std::vector<std::vector<float>>> full_precision_with_calibration(
    const ToyModel& model, const RunConfig& cfg) {
  Runner runner(model, cfg, /*quantized=*/false, nullptr);
  Trajectory tr = runner.run();
  auto cal = std::move(tr.act_absmax);
  return {to_result(std::move(tr)), std::move(cal)};
}

}  // namespace

RunResult run_denoise(const ToyModel& model, const RunConfig& cfg, const RunResult* reference) {
  cfg.validate();
  if (model.layers.empty()) throw ValidationError("run_denoise: empty model");
  std::optional<RunResult> own_ref;
  std::vector<std::vector<float>> calibration;
  if (!reference || cfg.activation_method == ActivationMethod::SmoothQuant) {
    auto [ref, cal] = full_precision_with_calibration(model, cfg);
    own_ref = std::move(ref);
    calibration = std::move(cal);
    if (!reference) reference = &*own_ref;
  }

  Runner runner(model, cfg, /*quantized=*/true, &calibration);
  RunResult r = to_result(runner.run());
  r.weight_reports = runner.reports();
  r.final_mse = mse_between(r.final_state, reference->final_state);
  return r;
}

std::map<std::string, BitSchedule> baseline_schedules(std::size_t steps, int b_low, int b_high,
                                                      std::uint64_t seed) {
  const std::size_t first = (steps + 1) / 2;
  std::map<std::string, BitSchedule> out;
  auto& stp = out["stp"].bits;
  auto& itp = out["itp"].bits;
  auto& abs = out["abs"].bits;
  for (std::size_t t = 0; t < steps; ++t) {
    stp.push_back(t < first ? b_low : b_high);
    itp.push_back(t < first ? b_high : b_low);
    abs.push_back(t % 2 == 0 ? b_low : b_high);
  }
  auto& sba = out["sba"].bits;
  sba.assign(steps, b_low);
  std::fill(sba.begin(), sba.begin() + std::ptrdiff_t(steps / 2), b_high);
  Rng rng(seed);
  for (std::size_t i = steps; i > 1; --i) std::swap(sba[i - 1], sba[rng.below(i)]);
  return out;
}

std::vector<double> scheduler_increments(const std::vector<double>& drift_trace) {
  std::vector<double> inc(drift_trace.size() + 1, 0.0);
  for (std::size_t i = 2; i < inc.size(); ++i) inc[i] = drift_trace[i - 2];
  return inc;
}

std::vector<SweepRow> delta_sweep(const ToyModel& model, const RunConfig& cfg,
                                  const std::vector<double>& deltas) {
  if (!std::is_sorted(deltas.begin(), deltas.end()))
    throw ValidationError("delta_sweep: thresholds must be sorted ascending");
  auto [reference, calibration] = full_precision_with_calibration(model, cfg);
  const auto increments = scheduler_increments(reference.drift_trace);
  std::vector<SweepRow> rows(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    RunConfig c = cfg;
    c.scheduler.kind = SchedulerKind::Gbs;
    c.scheduler.delta = deltas[i];
    const RunResult r = run_denoise(model, c, &reference);
    rows[i].delta = deltas[i];
    rows[i].average_bits = r.average_bits;
    rows[i].final_mse = r.final_mse;
    rows[i].open_loop_average_bits =
        run_schedule(increments, deltas[i], cfg.b_low, cfg.b_high).average_bits();
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "delta,average_bits,final_mse,open_loop_average_bits\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", r.delta, r.average_bits, r.final_mse,
                  r.open_loop_average_bits);
    out += buf;
  }
  return out;
}

}  // namespace dvdq::sim
