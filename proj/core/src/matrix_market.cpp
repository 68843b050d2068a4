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

#include "hkkt/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace hkkt {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, long line,
                       const std::string& message) {
  throw MatrixMarketError(path.string() + ":" + std::to_string(line) + ": " +
                          message);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format_value(double v) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, buf + len);
}

}  // namespace

MatrixMarketData read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MatrixMarketError("cannot open " + path.string());
  }

  long lineno = 0;
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, qualifier;
  header >> banner >> object >> format >> field >> qualifier;
  if (banner != "%%MatrixMarket") fail(path, lineno, "missing banner");
  if (lower(object) != "matrix" || lower(format) != "coordinate") {
    fail(path, lineno, "only 'matrix coordinate' files are supported");
  }
  if (lower(field) != "real" && lower(field) != "integer") {
    fail(path, lineno, "only real-valued files are supported");
  }
  const std::string qual = lower(qualifier);
  bool symmetric = false;
  if (qual == "symmetric") {
    symmetric = true;
  } else if (qual != "general") {
    fail(path, lineno, "unsupported qualifier '" + qualifier + "'");
  }

  // Skip comments, then read the size line.
  index_t nrows = 0, ncols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) fail(path, lineno, "missing size line");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream sizes(line);
    if (!(sizes >> nrows >> ncols >> nnz)) {
      fail(path, lineno, "malformed size line");
    }
    break;
  }
  if (nrows < 0 || ncols < 0 || nnz < 0) {
    fail(path, lineno, "negative size");
  }

  std::vector<Triplet> entries;
  entries.reserve(nnz);
  for (index_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) {
      fail(path, lineno, "expected " + std::to_string(nnz) +
                             " entries, file ended after " +
                             std::to_string(k));
    }
    ++lineno;
    std::istringstream entry(line);
    index_t i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) {
      fail(path, lineno, "malformed entry line");
    }
    if (i < 1 || i > nrows || j < 1 || j > ncols) {
      fail(path, lineno, "index out of range");
    }
    if (symmetric && i < j) {
      fail(path, lineno, "symmetric file stores an upper-triangle entry");
    }
    entries.push_back({i - 1, j - 1, v});
  }

  try {
    return {CscMatrix::from_triplets(nrows, ncols, entries), symmetric};
  } catch (const InvalidMatrixError& e) {
    throw MatrixMarketError(path.string() + ": " + e.what());
  }
}

void write_matrix_market(const std::filesystem::path& path, const CscMatrix& a,
                         bool symmetric) {
  std::ofstream out(path);
  if (!out) {
    throw MatrixMarketError("cannot open " + path.string() + " for writing");
  }
  out << "%%MatrixMarket matrix coordinate real "
      << (symmetric ? "symmetric" : "general") << "\n";
  out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
  for (index_t j = 0; j < a.cols(); ++j) {
    for (index_t p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      const index_t i = a.row_idx()[p];
      if (symmetric && i < j) {
        throw MatrixMarketError(
            "symmetric write requires lower-triangle storage");
      }
      out << (i + 1) << " " << (j + 1) << " " << format_value(a.values()[p])
          << "\n";
    }
  }
  if (!out) {
    throw MatrixMarketError("write failed for " + path.string());
  }
}

}  // namespace hkkt
