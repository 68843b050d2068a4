// Copyright 2026 The hybrid-kkt authors
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

#ifndef HKKT_MANIFEST_HPP_
#define HKKT_MANIFEST_HPP_

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "hkkt/kkt_system.hpp"

namespace hkkt {

class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(const std::string& what)
      : std::runtime_error(what) {}
};

struct KktSequence {
  std::vector<BlockKkt4x4> systems;
  /// True when all systems share the block sparsity patterns of the first.
  /// Advisory: a non-uniform sequence still solves, with per-matrix
  /// symbolic analysis.
  bool pattern_uniform = true;
};

/// Loads a JSON sequence manifest (see docs/formats.md). Matrix Market and
/// vector paths are resolved relative to the manifest's directory.
KktSequence load_sequence(const std::filesystem::path& manifest_path);

/// Writes systems plus a manifest named manifest.json into out_dir, using
/// the file naming scheme the loader expects. Returns the manifest path.
std::filesystem::path save_sequence(const std::filesystem::path& out_dir,
                                    std::span<const BlockKkt4x4> systems);

}  // namespace hkkt

#endif  // HKKT_MANIFEST_HPP_
