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

#include "dvdq/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dvdq::svg {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string label_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const {
    return kLeft + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (kHeight - kTop - kBottom);
  }
};

std::string open(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                  "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
       "</text>\n";
  return s;
}

std::string axes(const Frame& f, const std::string& x_label, const std::string& y_label) {
  std::string s;
  const double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) + "\" y2=\"" +
       num(bottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
       num(bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(bottom + 16) +
         "\" text-anchor=\"middle\">" + label_num(xv) + "</text>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(f.py(yv) + 4) +
         "\" text-anchor=\"end\">" + label_num(yv) + "</text>\n";
  }
  s += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((top + bottom) / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num((top + bottom) / 2) + ")\">" +
       escape(y_label) + "</text>\n";
  return s;
}

std::string legend(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 10 + 18 * double(i);
    const double x = kWidth - kRight + 12;
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(y - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
         kPalette[i % 8] + "\"/>\n";
    s += "<text x=\"" + num(x + 16) + "\" y=\"" + num(y + 1) + "\">" + escape(names[i]) +
         "</text>\n";
  }
  return s;
}

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
}

}  // namespace

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series) {
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      f.x0 = std::min(f.x0, s.x[i]);
      f.x1 = std::max(f.x1, s.x[i]);
      f.y0 = std::min(f.y0, s.y[i]);
      f.y1 = std::max(f.y1, s.y[i]);
    }
  }
  if (!std::isfinite(f.x0)) f = {0, 1, 0, 1};
  widen(f.x0, f.x1);
  widen(f.y0, f.y1);

  std::string out = open(title) + axes(f, x_label, y_label);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    names.push_back(s.name);
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(f.px(s.x[i])) + "," + num(f.py(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[k % 8]) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }
  out += legend(names) + "</svg>\n";
  return out;
}

std::string histogram(const std::string& title, double lo, double hi,
                      const std::vector<HistogramSeries>& series) {
  std::uint64_t peak = 1;
  std::size_t bins = 0;
  for (const auto& s : series) {
    bins = std::max(bins, s.counts.size());
    for (auto c : s.counts) peak = std::max(peak, c);
  }
  Frame f{lo, hi, 0.0, double(peak)};
  widen(f.x0, f.x1);
  std::string out = open(title) + axes(f, "error", "count");
  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    names.push_back(s.name);
    const double w = (f.x1 - f.x0) / double(std::max<std::size_t>(1, s.counts.size()));
    std::string pts = num(f.px(f.x0)) + "," + num(f.py(0));
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
      const double a = f.x0 + w * double(i), b = a + w;
      pts += " " + num(f.px(a)) + "," + num(f.py(double(s.counts[i])));
      pts += " " + num(f.px(b)) + "," + num(f.py(double(s.counts[i])));
    }
    pts += " " + num(f.px(f.x1)) + "," + num(f.py(0));
    out += "<polyline fill=\"" + std::string(kPalette[k % 8]) + "\" fill-opacity=\"0.25\" stroke=\"" +
           kPalette[k % 8] + "\" points=\"" + pts + "\"/>\n";
  }
  out += legend(names) + "</svg>\n";
  return out;
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<Series>& series) {
  double peak = 0.0;
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v)) peak = std::max(peak, v);
  Frame f{0.0, double(std::max<std::size_t>(1, labels.size())), 0.0, peak > 0 ? peak : 1.0};
  std::string out = open(title);
  const double bottom = kHeight - kBottom;
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(kWidth - kRight) +
         "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = f.y1 * i / 4.0;
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.py(yv) + 4) +
           "\" text-anchor=\"end\">" + label_num(yv) + "</text>\n";
  }
  const double group = (kWidth - kLeft - kRight) / f.x1;
  const double bar = group * 0.8 / double(std::max<std::size_t>(1, series.size()));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    names.push_back(series[k].name);
    for (std::size_t i = 0; i < series[k].y.size() && i < labels.size(); ++i) {
      const double v = std::isfinite(series[k].y[i]) ? series[k].y[i] : 0.0;
      const double x = kLeft + group * double(i) + group * 0.1 + bar * double(k);
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(f.py(v)) + "\" width=\"" + num(bar) +
             "\" height=\"" + num(bottom - f.py(v)) + "\" fill=\"" + kPalette[k % 8] + "\"/>\n";
    }
  }
  // Label at most ~16 groups to keep the axis legible.
  const std::size_t stride = std::max<std::size_t>(1, (labels.size() + 15) / 16);
  for (std::size_t i = 0; i < labels.size(); i += stride) {
    out += "<text x=\"" + num(kLeft + group * (double(i) + 0.5)) + "\" y=\"" + num(bottom + 16) +
           "\" text-anchor=\"middle\">" + escape(labels[i]) + "</text>\n";
  }
  out += legend(names) + "</svg>\n";
  return out;
}

}  // namespace dvdq::svg
