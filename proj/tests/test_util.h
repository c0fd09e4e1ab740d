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

// Shared helpers for the test binaries: scratch directories, hand-built NPY
// bytes and slow reference implementations written independently of src/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "dvdq/tensor.h"

namespace dvdq::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("dvdq_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// NPY v1.0 file assembled byte by byte from a dict literal and raw payload.
inline std::vector<std::uint8_t> make_npy(const std::string& dict,
                                          const std::vector<std::uint8_t>& payload,
                                          std::uint8_t major = 1) {
  std::string header = dict;
  while ((10 + header.size() + 1) % 64 != 0) header += ' ';
  header += '\n';
  std::vector<std::uint8_t> out = {0x93, 'N', 'U', 'M', 'P', 'Y', major, 0};
  out.push_back(std::uint8_t(header.size() & 0xff));
  out.push_back(std::uint8_t(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

template <typename T>
std::vector<std::uint8_t> raw_bytes(const std::vector<T>& v) {
  std::vector<std::uint8_t> out(v.size() * sizeof(T));
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

/// Dense block-diagonal normalized Hadamard matrix built by the Sylvester
/// recursion H_2n = [[H, H], [H, -H]], blocks in descending powers of two.
inline std::vector<std::vector<double>> dense_hadamard(std::size_t dim) {
  std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
  std::size_t offset = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const std::size_t b = std::size_t{1} << bit;
    if (!(dim & b)) continue;
    std::vector<std::vector<double>> s = {{1.0}};
    while (s.size() < b) {
      const std::size_t n = s.size();
      std::vector<std::vector<double>> t(2 * n, std::vector<double>(2 * n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          t[i][j] = s[i][j];
          t[i][j + n] = s[i][j];
          t[i + n][j] = s[i][j];
          t[i + n][j + n] = -s[i][j];
        }
      s = std::move(t);
    }
    const double norm = 1.0 / std::sqrt(double(b));
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) h[offset + i][offset + j] = s[i][j] * norm;
    offset += b;
  }
  return h;
}

/// X * M with M given densely, in float64.
inline std::vector<std::vector<double>> dense_times(const Tensor2D& x,
                                                    const std::vector<std::vector<double>>& m) {
  std::vector<std::vector<double>> out(x.rows(), std::vector<double>(m[0].size(), 0.0));
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t k = 0; k < x.cols(); ++k)
      for (std::size_t j = 0; j < m[0].size(); ++j) out[r][j] += double(x(r, k)) * m[k][j];
  return out;
}

/// Scalar quantizer written from the lattice definition: the code is the
/// nearest lattice index to the clamped value, ties away from alpha.
inline int oracle_code(float x, float alpha, float beta, int bits) {
  const int qmax = (1 << bits) - 1;
  if (!(alpha < beta)) return 0;
  double v = std::min<double>(std::max<double>(x, alpha), beta);
  const double step = (double(beta) - double(alpha)) / qmax;
  int code = int(std::floor((v - alpha) / step + 0.5));
  return std::min(std::max(code, 0), qmax);
}

inline float oracle_dequant(int code, float alpha, float beta, int bits) {
  const int qmax = (1 << bits) - 1;
  return float(double(alpha) + code * ((double(beta) - double(alpha)) / qmax));
}

}  // namespace dvdq::testing
