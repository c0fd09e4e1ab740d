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

#include "dvdq/quant.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <limits>

#include "dvdq/error.h"

namespace dvdq {

std::string to_string(ChannelAxis axis) { return axis == ChannelAxis::Row ? "row" : "col"; }

ChannelAxis channel_axis_from_string(const std::string& s) {
  if (s == "row") return ChannelAxis::Row;
  if (s == "col") return ChannelAxis::Col;
  throw ValidationError("unknown channel axis '" + s + "'");
}

int QuantParams::zero_code(std::size_t c) const {
  if (degenerate(c)) return 0;
  const double z = std::round(-double(channels[c].alpha) / step(c));
  return static_cast<int>(std::clamp(z, 0.0, double(qmax())));
}

void QuantParams::validate() const {
  if (bits < 2 || bits > 8)
    throw ValidationError("bit-width must lie in [2, 8], got " + std::to_string(bits));
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (!std::isfinite(channels[c].alpha) || !std::isfinite(channels[c].beta) ||
        channels[c].alpha > channels[c].beta) {
      throw ValidationError("channel " + std::to_string(c) + ": invalid bounds");
    }
  }
}

bool QuantizedTensor::operator==(const QuantizedTensor& o) const {
  if (codes != o.codes || rows != o.rows || cols != o.cols || axis != o.axis ||
      params.bits != o.params.bits || params.channels.size() != o.params.channels.size())
    return false;
  for (std::size_t c = 0; c < params.channels.size(); ++c) {
    // Bitwise comparison so -0.0 and 0.0 are distinguished.
    if (std::bit_cast<std::uint32_t>(params.channels[c].alpha) !=
            std::bit_cast<std::uint32_t>(o.params.channels[c].alpha) ||
        std::bit_cast<std::uint32_t>(params.channels[c].beta) !=
            std::bit_cast<std::uint32_t>(o.params.channels[c].beta))
      return false;
  }
  return true;
}

QuantParams minmax_params(const Tensor2D& t, int bits, ChannelAxis axis) {
  if (t.empty()) throw ValidationError("minmax_params: empty tensor");
  QuantParams p;
  p.bits = bits;
  const std::size_t n = channel_count(t, axis);
  p.channels.assign(n, {std::numeric_limits<float>::infinity(),
                        -std::numeric_limits<float>::infinity()});
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      auto& ch = p.channels[axis == ChannelAxis::Row ? r : c];
      const float v = t(r, c);
      ch.alpha = std::min(ch.alpha, v);
      ch.beta = std::max(ch.beta, v);
    }
  }
  p.validate();
  return p;
}

QuantizedTensor quantize(const Tensor2D& t, const QuantParams& p, ChannelAxis axis) {
  p.validate();
  if (p.channels.size() != channel_count(t, axis)) {
    throw ValidationError("quantize: params cover " + std::to_string(p.channels.size()) +
                          " channels, tensor has " + std::to_string(channel_count(t, axis)));
  }
  QuantizedTensor q;
  q.params = p;
  q.rows = t.rows();
  q.cols = t.cols();
  q.axis = axis;
  q.codes.resize(t.size());
  const int qmax = p.qmax();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      const auto& ch = p.channels[q.channel_of(r, c)];
      q.codes[r * t.cols() + c] = quantize_value(t(r, c), ch.alpha, ch.beta, qmax);
    }
  }
  return q;
}

Tensor2D dequantize(const QuantizedTensor& q) {
  Tensor2D out(q.rows, q.cols);
  const int qmax = q.params.qmax();
  for (std::size_t r = 0; r < q.rows; ++r) {
    for (std::size_t c = 0; c < q.cols; ++c) {
      const auto& ch = q.params.channels[q.channel_of(r, c)];
      out(r, c) = dequantize_value(q.codes[r * q.cols + c], ch.alpha, ch.beta, qmax);
    }
  }
  return out;
}

Tensor2D fake_quantize(const Tensor2D& t, int bits, ChannelAxis axis) {
  return dequantize(quantize(t, minmax_params(t, bits, axis), axis));
}

Tensor2D fake_quantize_per_tensor(const Tensor2D& t, int bits) {
  if (t.empty()) throw ValidationError("fake_quantize_per_tensor: empty tensor");
  const auto [lo, hi] = std::minmax_element(t.data().begin(), t.data().end());
  QuantParams p;
  p.bits = bits;
  p.channels.assign(t.rows(), {*lo, *hi});
  return dequantize(quantize(t, p, ChannelAxis::Row));
}

std::vector<float> smoothquant_scales(const Tensor2D& x, const Tensor2D& w, float alpha_mix) {
  if (x.cols() != w.cols())
    throw ValidationError("smoothquant_scales: activation and weight input dims differ");
  if (!(alpha_mix >= 0.0f && alpha_mix <= 1.0f))
    throw ValidationError("smoothquant_scales: alpha_mix must lie in [0, 1]");
  std::vector<double> xmax(x.cols(), 0.0), wmax(w.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) xmax[c] = std::max(xmax[c], double(std::fabs(x(r, c))));
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) wmax[c] = std::max(wmax[c], double(std::fabs(w(r, c))));

  std::vector<float> s(x.cols(), 1.0f);
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (xmax[c] == 0.0 || wmax[c] == 0.0) continue;
    const double v = std::pow(xmax[c], double(alpha_mix)) / std::pow(wmax[c], 1.0 - alpha_mix);
    if (std::isfinite(v) && v > 0.0) s[c] = static_cast<float>(v);
  }
  return s;
}

Tensor2D scale_columns(const Tensor2D& t, std::span<const float> s, bool divide) {
  if (s.size() != t.cols()) throw ValidationError("scale_columns: scale length mismatch");
  Tensor2D out = t;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = divide ? row[c] / s[c] : row[c] * s[c];
  }
  return out;
}

ErrorReport error_report(const Tensor2D& original, const Tensor2D& reconstructed,
                         ChannelAxis axis) {
  require_same_shape(original, reconstructed, "error_report");
  ErrorReport rep;
  const std::size_t nch = channel_count(original, axis);
  rep.per_channel_mse.assign(nch, 0.0);
  std::vector<std::size_t> counts(nch, 0);
  double sum = 0.0, sq = 0.0;
  for (std::size_t r = 0; r < original.rows(); ++r) {
    for (std::size_t c = 0; c < original.cols(); ++c) {
      const double e = double(reconstructed(r, c)) - double(original(r, c));
      const std::size_t ch = axis == ChannelAxis::Row ? r : c;
      rep.per_channel_mse[ch] += e * e;
      ++counts[ch];
      sum += e;
      sq += e * e;
      rep.max_abs = std::max(rep.max_abs, std::fabs(e));
    }
  }
  const double n = double(original.size());
  if (n == 0) return rep;
  for (std::size_t ch = 0; ch < nch; ++ch)
    if (counts[ch]) rep.per_channel_mse[ch] /= double(counts[ch]);
  rep.mse = sq / n;
  rep.err_mean = sum / n;
  // Second pass for the deviation keeps the variance free of cancellation.
  double var = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double e = double(reconstructed.data()[i]) - double(original.data()[i]) - rep.err_mean;
    var += e * e;
  }
  rep.err_std = std::sqrt(var / n);
  return rep;
}

nlohmann::json ErrorReport::to_json() const {
  return {{"mse", mse},
          {"max_abs", max_abs},
          {"err_mean", err_mean},
          {"err_std", err_std},
          {"per_channel_mse", per_channel_mse}};
}

ErrorReport ErrorReport::from_json(const nlohmann::json& j) {
  ErrorReport r;
  r.mse = j.at("mse").get<double>();
  r.max_abs = j.at("max_abs").get<double>();
  r.err_mean = j.at("err_mean").get<double>();
  r.err_std = j.at("err_std").get<double>();
  r.per_channel_mse = j.at("per_channel_mse").get<std::vector<double>>();
  return r;
}

std::string ErrorReport::csv_header() { return "mse,max_abs,err_mean,err_std,channels"; }

std::string ErrorReport::csv_row() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%zu", mse, max_abs, err_mean, err_std,
                per_channel_mse.size());
  return buf;
}

std::vector<std::uint64_t> error_histogram(const Tensor2D& original,
                                           const Tensor2D& reconstructed, double lo, double hi,
                                           std::size_t bins) {
  require_same_shape(original, reconstructed, "error_histogram");
  if (bins == 0 || !(hi > lo)) throw ValidationError("error_histogram: bad range or bin count");
  std::vector<std::uint64_t> h(bins, 0);
  const double width = (hi - lo) / double(bins);
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double e = double(reconstructed.data()[i]) - double(original.data()[i]);
    const double k = std::floor((e - lo) / width);
    h[static_cast<std::size_t>(std::clamp(k, 0.0, double(bins - 1)))]++;
  }
  return h;
}

}  // namespace dvdq
