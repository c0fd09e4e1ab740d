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
#include <span>
#include <vector>

#include "dvdq/tensor.h"

namespace dvdq {

/// Reads an NPY v1.0 array (dtype <f4 or <f8, C order, 1-D or 2-D).
/// 1-D arrays load as a single row; float64 is narrowed with round-to-nearest.
Tensor2D load_npy(const std::filesystem::path& path);

/// Writes an NPY v1.0 array with dtype <f4, C order, shape (rows, cols).
void save_npy(const Tensor2D& t, const std::filesystem::path& path);

/// In-memory forms of the above.
Tensor2D decode_npy(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_npy(const Tensor2D& t);

}  // namespace dvdq
