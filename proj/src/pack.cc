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

#include "dvdq/pack.h"

#include <bit>
#include <cstring>
#include <string>

#include "dvdq/error.h"
#include "dvdq/fileio.h"

namespace dvdq {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return std::uint32_t(b[off]) | std::uint32_t(b[off + 1]) << 8 | std::uint32_t(b[off + 2]) << 16 |
         std::uint32_t(b[off + 3]) << 24;
}

}  // namespace

bool packable_bits(int bits) {
  return bits == 2 || bits == 3 || bits == 4 || bits == 6 || bits == 8;
}

std::size_t packed_row_bytes(std::size_t cols, int bits) { return (cols * bits + 7) / 8; }

std::size_t packed_size(std::size_t rows, std::size_t cols, std::size_t channels, int bits) {
  return packfmt::kHeaderBytes + 8 * channels + rows * packed_row_bytes(cols, bits);
}

std::vector<std::uint8_t> pack(const QuantizedTensor& q) {
  const int bits = q.params.bits;
  if (!packable_bits(bits))
    throw ValidationError("pack: unsupported bit-width " + std::to_string(bits));
  if (q.codes.size() != q.rows * q.cols) throw ValidationError("pack: code count does not match shape");
  const std::size_t nch = q.params.channels.size();
  if (nch != (q.axis == ChannelAxis::Row ? q.rows : q.cols))
    throw ValidationError("pack: channel count does not match shape");

  std::vector<std::uint8_t> out;
  out.reserve(packed_size(q.rows, q.cols, nch, bits));
  for (std::uint8_t m : packfmt::kMagic) out.push_back(m);
  put_u16(out, packfmt::kVersion);
  out.push_back(std::uint8_t(bits));
  out.push_back(q.axis == ChannelAxis::Row ? 0 : 1);
  put_u32(out, std::uint32_t(q.rows));
  put_u32(out, std::uint32_t(q.cols));
  put_u32(out, std::uint32_t(nch));
  for (const auto& c : q.params.channels) put_f32(out, c.alpha);
  for (const auto& c : q.params.channels) put_f32(out, c.beta);

  const std::size_t row_bytes = packed_row_bytes(q.cols, bits);
  const unsigned limit = 1u << bits;
  for (std::size_t r = 0; r < q.rows; ++r) {
    const std::size_t base = out.size();
    out.resize(base + row_bytes, 0);
    std::size_t bitpos = 0;
    for (std::size_t c = 0; c < q.cols; ++c, bitpos += bits) {
      const unsigned code = q.codes[r * q.cols + c];
      if (code >= limit) throw ValidationError("pack: code out of range for bit-width");
      // A code spans at most two bytes since bits <= 8.
      const std::size_t byte = bitpos / 8;
      const unsigned shift = bitpos % 8;
      const unsigned v = code << shift;
      out[base + byte] |= std::uint8_t(v & 0xff);
      if (shift + bits > 8) out[base + byte + 1] |= std::uint8_t(v >> 8);
    }
  }
  return out;
}

QuantizedTensor unpack(std::span<const std::uint8_t> b) {
  if (b.size() < 4 || std::memcmp(b.data(), packfmt::kMagic, 4) != 0)
    throw FormatError("dvdq: bad magic");
  if (b.size() < packfmt::kHeaderBytes) throw FormatError("dvdq: truncated header");
  const std::uint16_t version = std::uint16_t(b[4] | (b[5] << 8));
  if (version != packfmt::kVersion)
    throw UnsupportedError("dvdq: unsupported container version " + std::to_string(version));
  QuantizedTensor q;
  q.params.bits = b[6];
  if (!packable_bits(q.params.bits))
    throw ValidationError("dvdq: unsupported bit-width " + std::to_string(q.params.bits));
  if (b[7] > 1) throw ValidationError("dvdq: bad channel axis byte");
  q.axis = b[7] == 0 ? ChannelAxis::Row : ChannelAxis::Col;
  q.rows = get_u32(b, 8);
  q.cols = get_u32(b, 12);
  const std::size_t nch = get_u32(b, 16);
  if (nch != (q.axis == ChannelAxis::Row ? q.rows : q.cols))
    throw ValidationError("dvdq: channel count does not match shape");
  const int bits = q.params.bits;
  if (b.size() != packed_size(q.rows, q.cols, nch, bits))
    throw FormatError("dvdq: payload length " + std::to_string(b.size()) + " does not match header (" +
                      std::to_string(packed_size(q.rows, q.cols, nch, bits)) + " expected)");

  q.params.channels.resize(nch);
  std::size_t off = packfmt::kHeaderBytes;
  for (auto& c : q.params.channels) c.alpha = std::bit_cast<float>(get_u32(b, off)), off += 4;
  for (auto& c : q.params.channels) c.beta = std::bit_cast<float>(get_u32(b, off)), off += 4;
  q.params.validate();

  const std::size_t row_bytes = packed_row_bytes(q.cols, bits);
  const unsigned mask = (1u << bits) - 1;
  q.codes.resize(q.rows * q.cols);
  for (std::size_t r = 0; r < q.rows; ++r) {
    const std::uint8_t* row = b.data() + off + r * row_bytes;
    std::size_t bitpos = 0;
    for (std::size_t c = 0; c < q.cols; ++c, bitpos += bits) {
      const std::size_t byte = bitpos / 8;
      const unsigned shift = bitpos % 8;
      unsigned v = row[byte] >> shift;
      if (shift + bits > 8) v |= unsigned(row[byte + 1]) << (8 - shift);
      q.codes[r * q.cols + c] = std::uint8_t(v & mask);
    }
  }
  return q;
}

double memory_ratio(std::span<const std::uint8_t> packed, int original_bits) {
  if (packed.size() < packfmt::kHeaderBytes || std::memcmp(packed.data(), packfmt::kMagic, 4) != 0)
    throw FormatError("dvdq: bad magic");
  const double original = double(get_u32(packed, 8)) * double(get_u32(packed, 12)) * original_bits / 8.0;
  return original / double(packed.size());
}

void write_dvdq(const std::filesystem::path& path, const QuantizedTensor& q) {
  write_file_bytes(path, pack(q));
}

QuantizedTensor read_dvdq(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return unpack(bytes);
}

}  // namespace dvdq
