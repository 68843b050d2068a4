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
#include <cmath>
#include <numeric>

#include "hkkt/cholesky.hpp"

namespace hkkt {

namespace {

// Lower triangle of P A P^T in unsorted CSC; row order within a column is
// irrelevant because the factorization scatters into a dense accumulator.
struct PermutedLower {
  std::vector<index_t> col_ptr;
  std::vector<index_t> row_idx;
  std::vector<double> values;
};

PermutedLower permute_lower(const CscMatrix& a_lower,
                            const Permutation& ordering) {
  const index_t n = a_lower.cols();
  PermutedLower out;
  out.col_ptr.assign(n + 1, 0);
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = a_lower.col_ptr()[j]; p < a_lower.col_ptr()[j + 1]; ++p) {
      const index_t i = a_lower.row_idx()[p];
      const index_t r = ordering.inverse[i];
      const index_t c = ordering.inverse[j];
      out.col_ptr[std::min(r, c) + 1]++;
    }
  }
  std::partial_sum(out.col_ptr.begin(), out.col_ptr.end(),
                   out.col_ptr.begin());
  out.row_idx.resize(out.col_ptr[n]);
  out.values.resize(out.col_ptr[n]);
  std::vector<index_t> next(out.col_ptr.begin(), out.col_ptr.end() - 1);
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = a_lower.col_ptr()[j]; p < a_lower.col_ptr()[j + 1]; ++p) {
      const index_t i = a_lower.row_idx()[p];
      const index_t r = ordering.inverse[i];
      const index_t c = ordering.inverse[j];
      const index_t q = next[std::min(r, c)]++;
      out.row_idx[q] = std::max(r, c);
      out.values[q] = a_lower.values()[p];
    }
  }
  return out;
}

}  // namespace

FactorizeResult numeric_cholesky(const CscMatrix& a_lower,
                                 std::shared_ptr<const SymbolicFactor> symbolic,
                                 double pivot_floor) {
  if (!a_lower.is_square()) {
    throw InvalidMatrixError("numeric_cholesky requires a square matrix");
  }
  const SymbolicFactor& s = *symbolic;
  const index_t n = s.size();
  if (a_lower.cols() != n) {
    throw InvalidMatrixError("numeric_cholesky: matrix/symbolic size mismatch");
  }

  const PermutedLower b = permute_lower(a_lower, s.ordering);
  const auto& lp = s.l_col_ptr;
  const auto& li = s.l_row_idx;
  std::vector<double> lv(s.l_nnz(), 0.0);

  // Left-looking with column link lists: list_head[r] chains the columns
  // whose next unconsumed entry sits in row r; pos[j] is that entry.
  std::vector<index_t> list_head(n, -1), list_next(n, -1), pos(n, 0);
  std::vector<index_t> stamp(n, -1);
  std::vector<double> x(n, 0.0);
  const double floor_value = std::max(pivot_floor, 0.0);

  for (index_t k = 0; k < n; ++k) {
    // Scatter column k of the permuted input; entries outside the symbolic
    // pattern mean the symbolic factor belongs to a different pattern.
    for (index_t p = lp[k]; p < lp[k + 1]; ++p) stamp[li[p]] = k;
    for (index_t p = b.col_ptr[k]; p < b.col_ptr[k + 1]; ++p) {
      if (stamp[b.row_idx[p]] != k) {
        throw InvalidMatrixError(
            "numeric_cholesky: entry outside the symbolic pattern at column " +
            std::to_string(k));
      }
      x[b.row_idx[p]] += b.values[p];
    }

    for (index_t j = list_head[k]; j != -1;) {
      const index_t j_next = list_next[j];
      const double lkj = lv[pos[j]];
      for (index_t p = pos[j]; p < lp[j + 1]; ++p) {
        x[li[p]] -= lv[p] * lkj;
      }
      if (++pos[j] < lp[j + 1]) {
        const index_t r = li[pos[j]];
        list_next[j] = list_head[r];
        list_head[r] = j;
      }
      j = j_next;
    }

    const double pivot = x[k];
    if (!(pivot > floor_value)) {  // also catches NaN
      for (index_t p = lp[k]; p < lp[k + 1]; ++p) x[li[p]] = 0.0;
      return NotSpdFailure{k, pivot};
    }
    const double dk = std::sqrt(pivot);
    lv[lp[k]] = dk;
    x[k] = 0.0;
    for (index_t p = lp[k] + 1; p < lp[k + 1]; ++p) {
      const index_t i = li[p];
      lv[p] = x[i] / dk;
      x[i] = 0.0;
    }
    pos[k] = lp[k] + 1;
    if (pos[k] < lp[k + 1]) {
      const index_t r = li[pos[k]];
      list_next[k] = list_head[r];
      list_head[r] = k;
    }
  }
  return NumericCholesky(std::move(symbolic), std::move(lv));
}

std::vector<double> factor_solve(const NumericCholesky& factor,
                                 std::span<const double> b) {
  const SymbolicFactor& s = factor.symbolic();
  const index_t n = s.size();
  if (static_cast<index_t>(b.size()) != n) {
    throw InvalidMatrixError("factor_solve: rhs has length " +
                             std::to_string(b.size()) + ", expected " +
                             std::to_string(n));
  }
  const auto& lp = s.l_col_ptr;
  const auto& li = s.l_row_idx;
  const auto& lv = factor.l_values();
  const auto& perm = s.ordering.perm;

  std::vector<double> w(n);
  for (index_t r = 0; r < n; ++r) w[r] = b[perm[r]];
  for (index_t j = 0; j < n; ++j) {  // L w = P b
    w[j] /= lv[lp[j]];
    const double wj = w[j];
    for (index_t p = lp[j] + 1; p < lp[j + 1]; ++p) w[li[p]] -= lv[p] * wj;
  }
  for (index_t j = n - 1; j >= 0; --j) {  // L^T z = w
    double acc = w[j];
    for (index_t p = lp[j] + 1; p < lp[j + 1]; ++p) acc -= lv[p] * w[li[p]];
    w[j] = acc / lv[lp[j]];
  }
  std::vector<double> xout(n);
  for (index_t r = 0; r < n; ++r) xout[perm[r]] = w[r];
  return xout;
}

}  // namespace hkkt
