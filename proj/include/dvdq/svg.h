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

#include <cstdint>
#include <string>
#include <vector>

namespace dvdq::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct HistogramSeries {
  std::string name;
  std::vector<std::uint64_t> counts;
};

// All charts are 640x400 with fixed margins, text as <text> elements and
// coordinates printed with three decimals, so output bytes depend only on
// the inputs.

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

/// Overlaid step histograms sharing bins over [lo, hi].
std::string histogram(const std::string& title, double lo, double hi,
                      const std::vector<HistogramSeries>& series);

/// Grouped bars: one group per label, one bar per series (y values only).
std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<Series>& series);

std::string escape(const std::string& s);

}  // namespace dvdq::svg
