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

#ifndef HKKT_MATRIX_MARKET_HPP_
#define HKKT_MATRIX_MARKET_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "hkkt/csc_matrix.hpp"

namespace hkkt {

/// Parse failure with file and line context in the message.
class MatrixMarketError : public std::runtime_error {
 public:
  explicit MatrixMarketError(const std::string& what)
      : std::runtime_error(what) {}
};

struct MatrixMarketData {
  CscMatrix matrix;
  /// True when the file carried the "symmetric" qualifier; the matrix then
  /// holds the lower triangle only.
  bool symmetric = false;
};

/// Reads a coordinate-format real matrix ("general" or "symmetric").
/// Indices are 1-based on disk, 0-based in memory. Duplicate entries are
/// summed. Symmetric files must store each entry on or below the diagonal.
MatrixMarketData read_matrix_market(const std::filesystem::path& path);

/// Writes coordinate format, shortest round-trip value formatting.
/// With symmetric = true the matrix must be in lower-triangle storage.
void write_matrix_market(const std::filesystem::path& path, const CscMatrix& a,
                         bool symmetric);

}  // namespace hkkt

#endif  // HKKT_MATRIX_MARKET_HPP_
