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

#include "dvdq/manifest.h"

#include <set>

#include <json.hpp>

#include "dvdq/error.h"
#include "dvdq/fileio.h"

namespace dvdq {

using nlohmann::json;

Manifest load_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }

  Manifest m;
  try {
    m.format_version = doc.at("format_version").get<int>();
    if (m.format_version != Manifest::kFormatVersion) {
      throw UnsupportedError(path.string() + ": unsupported manifest format_version " +
                             std::to_string(m.format_version));
    }
    m.model = doc.at("model").get<std::string>();
    m.seed = doc.value("seed", std::uint64_t{0});
    const auto base = path.parent_path();
    std::set<std::string> seen;
    for (const auto& l : doc.at("layers")) {
      LayerEntry e;
      e.name = l.at("name").get<std::string>();
      e.weight_file = base / l.at("weight").get<std::string>();
      e.rows = l.at("rows").get<std::size_t>();
      e.cols = l.at("cols").get<std::size_t>();
      e.bits = l.value("bits", 4);
      if (!seen.insert(e.name).second)
        throw ValidationError(path.string() + ": duplicate layer name '" + e.name + "'");
      m.layers.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": manifest schema error: " + e.what());
  }

  for (const auto& l : m.layers) {
    if (!std::filesystem::exists(l.weight_file)) {
      throw ValidationError("layer '" + l.name + "': weight file " + l.weight_file.string() +
                            " does not exist");
    }
  }
  return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  json doc;
  doc["format_version"] = m.format_version;
  doc["model"] = m.model;
  doc["seed"] = m.seed;
  doc["layers"] = json::array();
  for (const auto& l : m.layers) {
    doc["layers"].push_back({{"name", l.name},
                             {"weight", l.weight_file.generic_string()},
                             {"rows", l.rows},
                             {"cols", l.cols},
                             {"bits", l.bits}});
  }
  write_file_text(path, doc.dump(2) + "\n");
}

}  // namespace dvdq
