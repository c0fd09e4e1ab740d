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
#include <filesystem>
#include <string>
#include <vector>

namespace dvdq {

struct LayerEntry {
  std::string name;
  std::filesystem::path weight_file;  // resolved against the manifest's directory on load
  std::size_t rows = 0;
  std::size_t cols = 0;
  int bits = 4;
};

/// JSON description of a model's quantizable layers.
///
/// Schema (format_version 1):
///   { "format_version": 1, "model": str, "seed": int,
///     "layers": [ { "name": str, "weight": str, "rows": int, "cols": int, "bits": int } ] }
/// Relative weight paths are resolved against the manifest's directory.
struct Manifest {
  static constexpr int kFormatVersion = 1;

  std::string model;
  std::vector<LayerEntry> layers;
  std::uint64_t seed = 0;
  int format_version = kFormatVersion;
};

/// Parses and validates a manifest. Throws FormatError on bad JSON or schema,
/// ValidationError on duplicate layer names or missing weight files.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes `m` with weight paths stored as given.
void save_manifest(const Manifest& m, const std::filesystem::path& path);

}  // namespace dvdq
