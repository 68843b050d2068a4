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

#include <algorithm>
#include <numeric>

#include "hkkt/cholesky.hpp"

namespace hkkt {

namespace {

// Upper-triangle pattern of P A P^T with sorted columns. A must already be
// structurally symmetric; we read every stored entry and keep (r, c) with
// r <= c after permuting, which covers either input triangle.
CscMatrix permuted_upper_pattern(const CscMatrix& sym,
                                 const Permutation& ordering) {
  const index_t n = sym.cols();
  std::vector<Triplet> entries;
  entries.reserve(sym.nnz());
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = sym.col_ptr()[j]; p < sym.col_ptr()[j + 1]; ++p) {
      const index_t i = sym.row_idx()[p];
      const index_t r = ordering.inverse[i];
      const index_t c = ordering.inverse[j];
      if (r <= c) entries.push_back({r, c, 0.0});
    }
  }
  return CscMatrix::from_triplets(n, n, entries);
}

// Elimination tree from the upper-triangle pattern, with path compression.
std::vector<index_t> elimination_tree(const CscMatrix& upper) {
  const index_t n = upper.cols();
  std::vector<index_t> parent(n, -1), ancestor(n, -1);
  for (index_t k = 0; k < n; ++k) {
    for (index_t p = upper.col_ptr()[k]; p < upper.col_ptr()[k + 1]; ++p) {
      index_t i = upper.row_idx()[p];
      while (i != -1 && i < k) {
        const index_t next = ancestor[i];
        ancestor[i] = k;
        if (next == -1) parent[i] = k;
        i = next;
      }
    }
  }
  return parent;
}

// Row pattern of L at row k: the columns j < k with L(k, j) != 0, found by
// walking from each upper-triangle entry up the elimination tree until an
// already-visited node. 'stamp' marks visited nodes with the value k.
template <typename Visitor>
void row_reach(const CscMatrix& upper, index_t k,
               const std::vector<index_t>& parent, std::vector<index_t>& stamp,
               Visitor&& visit) {
  stamp[k] = k;
  for (index_t p = upper.col_ptr()[k]; p < upper.col_ptr()[k + 1]; ++p) {
    index_t i = upper.row_idx()[p];
    while (i < k && stamp[i] != k) {
      visit(i);
      stamp[i] = k;
      i = parent[i];
    }
  }
}

}  // namespace

SymbolicFactor symbolic_cholesky(const CscMatrix& pattern,
                                 Permutation ordering) {
  if (!pattern.is_square()) {
    throw InvalidMatrixError("symbolic_cholesky requires a square pattern");
  }
  const index_t n = pattern.cols();
  if (ordering.size() != n) {
    throw InvalidMatrixError("symbolic_cholesky: ordering size mismatch");
  }

  const CscMatrix sym = pattern.symmetrized_pattern();
  const CscMatrix upper = permuted_upper_pattern(sym, ordering);

  SymbolicFactor s;
  s.ordering = std::move(ordering);
  s.parent = elimination_tree(upper);

  // Pass 1: column counts of L (diagonal included).
  s.col_counts.assign(n, 1);
  std::vector<index_t> stamp(n, -1);
  for (index_t k = 0; k < n; ++k) {
    row_reach(upper, k, s.parent, stamp,
              [&](index_t j) { s.col_counts[j]++; });
  }

  // Pass 2: fill the pattern. Appending row k in ascending k keeps every
  // column sorted with its diagonal entry first.
  s.l_col_ptr.assign(n + 1, 0);
  std::partial_sum(s.col_counts.begin(), s.col_counts.end(),
                   s.l_col_ptr.begin() + 1);
  s.l_row_idx.assign(s.l_col_ptr[n], 0);
  std::vector<index_t> cursor(s.l_col_ptr.begin(), s.l_col_ptr.end() - 1);
  std::fill(stamp.begin(), stamp.end(), index_t{-1});
  for (index_t k = 0; k < n; ++k) {
    s.l_row_idx[cursor[k]++] = k;  // diagonal
    row_reach(upper, k, s.parent, stamp,
              [&](index_t j) { s.l_row_idx[cursor[j]++] = k; });
  }
  return s;
}

}  // namespace hkkt
