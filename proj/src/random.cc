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

#include "dvdq/random.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "dvdq/error.h"

namespace dvdq {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("Rng::below requires n > 0");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

Tensor2D gaussian_tensor(std::uint64_t seed, std::size_t rows, std::size_t cols, float mean,
                         float std, double outlier_frac, float outlier_scale) {
  if (!(std > 0.0f)) throw ValidationError("gaussian_tensor: std must be positive");
  if (!(outlier_frac >= 0.0 && outlier_frac <= 1.0))
    throw ValidationError("gaussian_tensor: outlier_frac must lie in [0, 1]");

  Rng rng(seed);
  const std::size_t n = rows * cols;
  std::vector<float> data(n);
  for (auto& v : data) v = static_cast<float>(mean + std * rng.normal());

  const auto k = static_cast<std::size_t>(std::floor(outlier_frac * double(n)));
  if (k > 0) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.below(n - i);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      double z;
      do {
        z = rng.normal();
      } while (std::fabs(z) < 1.0);
      data[idx[i]] = static_cast<float>(mean + double(std) * outlier_scale * z);
    }
  }
  return Tensor2D(rows, cols, std::move(data));
}

}  // namespace dvdq
