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
#include <filesystem>
#include <span>
#include <vector>

#include "dvdq/quant.h"

namespace dvdq {

/// `.dvdq` container, version 1. All integers little-endian.
///
///   offset  size  field
///   0       4     magic "DVDQ"
///   4       2     version (1)
///   6       1     bits (2, 3, 4, 6 or 8)
///   7       1     channel axis (0 = row, 1 = col)
///   8       4     rows
///   12      4     cols
///   16      4     channel count C
///   20      4*C   alpha per channel (float32)
///   20+4C   4*C   beta per channel (float32)
///   20+8C   ...   payload: rows * ceil(cols * bits / 8) bytes
///
/// Each row is an LSB-first bit stream: element i occupies bits
/// [i*bits, (i+1)*bits) of the row, so 4-bit element 2k is the low nibble of
/// byte k, 3-bit packs 8 elements in 3 bytes and 6-bit packs 4 in 3. Rows are
/// zero-padded to a byte boundary.
namespace packfmt {
inline constexpr std::uint8_t kMagic[4] = {'D', 'V', 'D', 'Q'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 20;
}  // namespace packfmt

bool packable_bits(int bits);

/// Bytes per packed row.
std::size_t packed_row_bytes(std::size_t cols, int bits);

/// Exact container size for the given shape.
std::size_t packed_size(std::size_t rows, std::size_t cols, std::size_t channels, int bits);

std::vector<std::uint8_t> pack(const QuantizedTensor& q);

/// Throws FormatError on bad magic or truncation, UnsupportedError on an
/// unknown version, ValidationError on out-of-range header fields.
QuantizedTensor unpack(std::span<const std::uint8_t> bytes);

/// (rows * cols * original_bits / 8) / bytes.size(), with the header and the
/// per-channel parameters counted in the packed size.
double memory_ratio(std::span<const std::uint8_t> packed, int original_bits = 16);

void write_dvdq(const std::filesystem::path& path, const QuantizedTensor& q);
QuantizedTensor read_dvdq(const std::filesystem::path& path);

}  // namespace dvdq
