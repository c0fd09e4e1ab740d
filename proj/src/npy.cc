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

#include "dvdq/npy.h"

#include <bit>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

#include "dvdq/error.h"
#include "dvdq/fileio.h"

static_assert(std::endian::native == std::endian::little, "NPY codec assumes a little-endian host");

namespace dvdq {
namespace {

constexpr std::uint8_t kMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};

// Value text following `'key':` in the header dict, trimmed of leading spaces.
std::optional<std::string_view> dict_value(std::string_view header, std::string_view key) {
  const std::string quoted = "'" + std::string(key) + "'";
  auto pos = header.find(quoted);
  if (pos == std::string_view::npos) return std::nullopt;
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string_view::npos) return std::nullopt;
  ++pos;
  while (pos < header.size() && header[pos] == ' ') ++pos;
  return header.substr(pos);
}

std::vector<std::size_t> parse_shape(std::string_view v) {
  if (v.empty() || v.front() != '(') throw FormatError("npy: malformed shape tuple");
  const auto close = v.find(')');
  if (close == std::string_view::npos) throw FormatError("npy: unterminated shape tuple");
  std::vector<std::size_t> dims;
  std::string_view body = v.substr(1, close - 1);
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (body[i] == ' ' || body[i] == ',')) ++i;
    if (i >= body.size()) break;
    std::size_t start = i;
    while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i;
    if (start == i) throw FormatError("npy: non-numeric shape entry");
    dims.push_back(std::stoull(std::string(body.substr(start, i - start))));
  }
  return dims;
}

}  // namespace

Tensor2D decode_npy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic, 6) != 0)
    throw FormatError("npy: bad magic");
  if (bytes[6] != 1 || bytes[7] != 0)
    throw UnsupportedError("npy: unsupported format version " + std::to_string(bytes[6]) + "." +
                           std::to_string(bytes[7]));
  const std::size_t header_len = bytes[8] | (std::size_t(bytes[9]) << 8);
  if (bytes.size() < 10 + header_len) throw FormatError("npy: truncated header");
  const std::string_view header(reinterpret_cast<const char*>(bytes.data() + 10), header_len);

  const auto descr = dict_value(header, "descr");
  const auto fortran = dict_value(header, "fortran_order");
  const auto shape_text = dict_value(header, "shape");
  if (!descr || !fortran || !shape_text) throw FormatError("npy: header missing required keys");

  std::size_t item = 0;
  if (descr->starts_with("'<f4'")) {
    item = 4;
  } else if (descr->starts_with("'<f8'")) {
    item = 8;
  } else {
    throw UnsupportedError("npy: unsupported dtype " +
                           std::string(descr->substr(0, descr->find(','))));
  }
  if (fortran->starts_with("True")) throw UnsupportedError("npy: Fortran-ordered arrays are not supported");
  if (!fortran->starts_with("False")) throw FormatError("npy: malformed fortran_order");

  const auto dims = parse_shape(*shape_text);
  std::size_t rows = 0, cols = 0;
  if (dims.size() == 1) {
    rows = 1;
    cols = dims[0];
  } else if (dims.size() == 2) {
    rows = dims[0];
    cols = dims[1];
  } else {
    throw UnsupportedError("npy: only 1-D and 2-D arrays are supported, got rank " +
                           std::to_string(dims.size()));
  }

  const std::size_t n = rows * cols;
  const std::size_t offset = 10 + header_len;
  if (bytes.size() - offset < n * item) throw FormatError("npy: truncated payload");

  std::vector<float> data(n);
  if (item == 4) {
    std::memcpy(data.data(), bytes.data() + offset, n * 4);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double d;
      std::memcpy(&d, bytes.data() + offset + i * 8, 8);
      data[i] = static_cast<float>(d);
    }
  }
  return Tensor2D(rows, cols, std::move(data));
}

std::vector<std::uint8_t> encode_npy(const Tensor2D& t) {
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" +
                       std::to_string(t.rows()) + ", " + std::to_string(t.cols()) + "), }";
  // Pad with spaces so magic + version + length + header is 64-byte aligned,
  // with the terminating newline as the last header byte.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::vector<std::uint8_t> out;
  out.reserve(10 + header.size() + t.size() * 4);
  for (std::uint8_t m : kMagic) out.push_back(m);
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xff));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  const auto* p = reinterpret_cast<const std::uint8_t*>(t.data().data());
  out.insert(out.end(), p, p + t.size() * 4);
  return out;
}

Tensor2D load_npy(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_npy(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_npy(const Tensor2D& t, const std::filesystem::path& path) {
  write_file_bytes(path, encode_npy(t));
}

}  // namespace dvdq
