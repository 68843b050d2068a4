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

#include "hkkt/csc_matrix.hpp"

#include <algorithm>
#include <numeric>

namespace hkkt {

namespace {

std::string dim_string(index_t nrows, index_t ncols) {
  return std::to_string(nrows) + "x" + std::to_string(ncols);
}

}  // namespace

CscMatrix::CscMatrix(index_t nrows, index_t ncols)
    : nrows_(nrows), ncols_(ncols), col_ptr_(ncols + 1, 0) {
  if (nrows < 0 || ncols < 0) {
    throw InvalidMatrixError("negative matrix dimension " +
                             dim_string(nrows, ncols));
  }
}

CscMatrix::CscMatrix(index_t nrows, index_t ncols,
                     std::vector<index_t> col_ptr,
                     std::vector<index_t> row_idx, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      col_ptr_(std::move(col_ptr)),
      row_idx_(std::move(row_idx)),
      values_(std::move(values)) {
  if (nrows < 0 || ncols < 0) {
    throw InvalidMatrixError("negative matrix dimension " +
                             dim_string(nrows, ncols));
  }
  if (static_cast<index_t>(col_ptr_.size()) != ncols_ + 1) {
    throw InvalidMatrixError("col_ptr length must be ncols+1");
  }
  if (col_ptr_.front() != 0 ||
      col_ptr_.back() != static_cast<index_t>(row_idx_.size())) {
    throw InvalidMatrixError("col_ptr must start at 0 and end at nnz");
  }
  if (row_idx_.size() != values_.size()) {
    throw InvalidMatrixError("row_idx and values lengths differ");
  }
  for (index_t j = 0; j < ncols_; ++j) {
    if (col_ptr_[j] > col_ptr_[j + 1]) {
      throw InvalidMatrixError("col_ptr not nondecreasing at column " +
                               std::to_string(j));
    }
    index_t prev = -1;
    for (index_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      const index_t i = row_idx_[p];
      if (i < 0 || i >= nrows_) {
        throw InvalidMatrixError("row index out of range in column " +
                                 std::to_string(j));
      }
      if (i <= prev) {
        throw InvalidMatrixError(
            "row indices not strictly increasing in column " +
            std::to_string(j));
      }
      prev = i;
    }
  }
}

CscMatrix CscMatrix::from_triplets(index_t nrows, index_t ncols,
                                   std::span<const Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw InvalidMatrixError("triplet (" + std::to_string(t.row) + "," +
                               std::to_string(t.col) + ") outside " +
                               dim_string(nrows, ncols));
    }
  }
  // Count per column, then place; duplicates are merged afterwards.
  std::vector<index_t> count(ncols + 1, 0);
  for (const auto& t : entries) count[t.col + 1]++;
  std::vector<index_t> col_ptr(ncols + 1, 0);
  std::partial_sum(count.begin(), count.end(), col_ptr.begin());

  std::vector<index_t> row_idx(entries.size());
  std::vector<double> values(entries.size());
  std::vector<index_t> next(col_ptr.begin(), col_ptr.end() - 1);
  for (const auto& t : entries) {
    const index_t p = next[t.col]++;
    row_idx[p] = t.row;
    values[p] = t.value;
  }

  // Sort each column and sum duplicates in place.
  std::vector<index_t> order;
  std::vector<index_t> merged_ptr(ncols + 1, 0);
  std::vector<index_t> merged_rows;
  std::vector<double> merged_vals;
  merged_rows.reserve(entries.size());
  merged_vals.reserve(entries.size());
  for (index_t j = 0; j < ncols; ++j) {
    const index_t lo = col_ptr[j], hi = col_ptr[j + 1];
    order.resize(hi - lo);
    std::iota(order.begin(), order.end(), lo);
    std::sort(order.begin(), order.end(),
              [&](index_t a, index_t b) { return row_idx[a] < row_idx[b]; });
    for (index_t k : order) {
      if (!merged_rows.empty() &&
          static_cast<index_t>(merged_rows.size()) > merged_ptr[j] &&
          merged_rows.back() == row_idx[k]) {
        merged_vals.back() += values[k];
      } else {
        merged_rows.push_back(row_idx[k]);
        merged_vals.push_back(values[k]);
      }
    }
    merged_ptr[j + 1] = static_cast<index_t>(merged_rows.size());
  }
  return CscMatrix(nrows, ncols, std::move(merged_ptr), std::move(merged_rows),
                   std::move(merged_vals));
}

CscMatrix CscMatrix::transpose(bool with_values) const {
  std::vector<index_t> col_ptr(nrows_ + 1, 0);
  for (index_t i : row_idx_) col_ptr[i + 1]++;
  std::partial_sum(col_ptr.begin(), col_ptr.end(), col_ptr.begin());
  std::vector<index_t> row_idx(row_idx_.size());
  std::vector<double> values(with_values ? values_.size() : row_idx_.size(),
                             0.0);
  std::vector<index_t> next(col_ptr.begin(), col_ptr.end() - 1);
  for (index_t j = 0; j < ncols_; ++j) {
    for (index_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      const index_t q = next[row_idx_[p]]++;
      row_idx[q] = j;
      if (with_values) values[q] = values_[p];
    }
  }
  return CscMatrix(ncols_, nrows_, std::move(col_ptr), std::move(row_idx),
                   std::move(values));
}

CscMatrix CscMatrix::symmetrized_pattern() const {
  if (!is_square()) {
    throw InvalidMatrixError("symmetrized_pattern requires a square matrix");
  }
  const index_t n = ncols_;
  std::vector<Triplet> entries;
  entries.reserve(row_idx_.size() * 2 + n);
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      const index_t i = row_idx_[p];
      entries.push_back({i, j, 0.0});
      if (i != j) entries.push_back({j, i, 0.0});
    }
  }
  for (index_t j = 0; j < n; ++j) entries.push_back({j, j, 0.0});
  return from_triplets(n, n, entries);
}

CscMatrix CscMatrix::full_from_lower() const {
  if (!is_square()) {
    throw InvalidMatrixError("full_from_lower requires a square matrix");
  }
  std::vector<Triplet> entries;
  entries.reserve(row_idx_.size() * 2);
  for (index_t j = 0; j < ncols_; ++j) {
    for (index_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      const index_t i = row_idx_[p];
      if (i < j) {
        throw InvalidMatrixError(
            "full_from_lower: entry above the diagonal in lower storage");
      }
      entries.push_back({i, j, values_[p]});
      if (i != j) entries.push_back({j, i, values_[p]});
    }
  }
  return from_triplets(nrows_, ncols_, entries);
}

index_t CscMatrix::diag_entries() const {
  index_t count = 0;
  const index_t n = std::min(nrows_, ncols_);
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      if (row_idx_[p] == j) {
        ++count;
        break;
      }
      if (row_idx_[p] > j) break;
    }
  }
  return count;
}

bool CscMatrix::same_pattern_as(const CscMatrix& other) const {
  return nrows_ == other.nrows_ && ncols_ == other.ncols_ &&
         col_ptr_ == other.col_ptr_ && row_idx_ == other.row_idx_;
}

Permutation Permutation::identity(index_t n) {
  Permutation p;
  p.perm.resize(n);
  p.inverse.resize(n);
  std::iota(p.perm.begin(), p.perm.end(), index_t{0});
  std::iota(p.inverse.begin(), p.inverse.end(), index_t{0});
  return p;
}

Permutation Permutation::from_vector(std::vector<index_t> perm) {
  const index_t n = static_cast<index_t>(perm.size());
  std::vector<index_t> inverse(n, -1);
  for (index_t i = 0; i < n; ++i) {
    const index_t v = perm[i];
    if (v < 0 || v >= n || inverse[v] != -1) {
      throw InvalidMatrixError("permutation is not a bijection on [0, n)");
    }
    inverse[v] = i;
  }
  Permutation p;
  p.perm = std::move(perm);
  p.inverse = std::move(inverse);
  return p;
}

std::vector<double> spmv(const CscMatrix& a, std::span<const double> x,
                         bool transpose) {
  const index_t in_dim = transpose ? a.rows() : a.cols();
  const index_t out_dim = transpose ? a.cols() : a.rows();
  if (static_cast<index_t>(x.size()) != in_dim) {
    throw InvalidMatrixError("spmv: x has length " +
                             std::to_string(x.size()) + ", expected " +
                             std::to_string(in_dim));
  }
  std::vector<double> y(out_dim, 0.0);
  const auto& cp = a.col_ptr();
  const auto& ri = a.row_idx();
  const auto& v = a.values();
  if (!transpose) {
    for (index_t j = 0; j < a.cols(); ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      for (index_t p = cp[j]; p < cp[j + 1]; ++p) y[ri[p]] += v[p] * xj;
    }
  } else {
    for (index_t j = 0; j < a.cols(); ++j) {
      double acc = 0.0;
      for (index_t p = cp[j]; p < cp[j + 1]; ++p) acc += v[p] * x[ri[p]];
      y[j] = acc;
    }
  }
  return y;
}

std::vector<double> symmetric_spmv(const CscMatrix& a_lower,
                                   std::span<const double> x) {
  if (!a_lower.is_square()) {
    throw InvalidMatrixError("symmetric_spmv requires a square matrix");
  }
  const index_t n = a_lower.cols();
  if (static_cast<index_t>(x.size()) != n) {
    throw InvalidMatrixError("symmetric_spmv: x has length " +
                             std::to_string(x.size()) + ", expected " +
                             std::to_string(n));
  }
  std::vector<double> y(n, 0.0);
  const auto& cp = a_lower.col_ptr();
  const auto& ri = a_lower.row_idx();
  const auto& v = a_lower.values();
  for (index_t j = 0; j < n; ++j) {
    const double xj = x[j];
    double acc = 0.0;
    for (index_t p = cp[j]; p < cp[j + 1]; ++p) {
      const index_t i = ri[p];
      y[i] += v[p] * xj;
      if (i != j) acc += v[p] * x[i];  // mirrored upper-triangle entry
    }
    y[j] += acc;
  }
  return y;
}

CscMatrix add_symmetric_lower(std::span<const CscMatrix* const> terms,
                              std::span<const double> coeffs,
                              std::span<const double> diag) {
  if (terms.size() != coeffs.size()) {
    throw InvalidMatrixError("add_symmetric_lower: terms/coeffs mismatch");
  }
  index_t n = static_cast<index_t>(diag.size());
  for (const CscMatrix* t : terms) {
    if (!t->is_square()) {
      throw InvalidMatrixError("add_symmetric_lower: non-square term");
    }
    if (n == 0) n = t->cols();
    if (t->cols() != n) {
      throw InvalidMatrixError("add_symmetric_lower: dimension mismatch");
    }
  }

  // Scatter-based union: one pass per column over all terms.
  std::vector<index_t> mark(n, -1);
  std::vector<double> work(n, 0.0);
  std::vector<index_t> rows_in_col;
  std::vector<index_t> col_ptr(n + 1, 0);
  std::vector<index_t> row_idx;
  std::vector<double> values;

  for (index_t j = 0; j < n; ++j) {
    rows_in_col.clear();
    // Diagonal entry is always present.
    mark[j] = j;
    work[j] = diag.empty() ? 0.0 : diag[j];
    rows_in_col.push_back(j);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const CscMatrix& m = *terms[t];
      const double c = coeffs[t];
      for (index_t p = m.col_ptr()[j]; p < m.col_ptr()[j + 1]; ++p) {
        const index_t i = m.row_idx()[p];
        if (i < j) {
          throw InvalidMatrixError(
              "add_symmetric_lower: term not in lower-triangle storage");
        }
        if (mark[i] != j) {
          mark[i] = j;
          work[i] = 0.0;
          rows_in_col.push_back(i);
        }
        work[i] += c * m.values()[p];
      }
    }
    std::sort(rows_in_col.begin(), rows_in_col.end());
    for (index_t i : rows_in_col) {
      row_idx.push_back(i);
      values.push_back(work[i]);
    }
    col_ptr[j + 1] = static_cast<index_t>(row_idx.size());
  }
  return CscMatrix(n, n, std::move(col_ptr), std::move(row_idx),
                   std::move(values));
}

CscMatrix ata_lower(const CscMatrix& a, std::span<const double> d) {
  if (!d.empty() && static_cast<index_t>(d.size()) != a.rows()) {
    throw InvalidMatrixError("ata_lower: diagonal length must match rows");
  }
  const index_t n = a.cols();
  const CscMatrix at = a.transpose();

  std::vector<index_t> mark(n, -1);
  std::vector<double> work(n, 0.0);
  std::vector<index_t> rows_in_col;
  std::vector<index_t> col_ptr(n + 1, 0);
  std::vector<index_t> row_idx;
  std::vector<double> values;

  // Column j of A^T D A is sum_k d_k A(k,j) * (row k of A); rows of A are
  // the columns of at. Keep i >= j only.
  for (index_t j = 0; j < n; ++j) {
    rows_in_col.clear();
    for (index_t p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      const index_t k = a.row_idx()[p];
      const double w = (d.empty() ? 1.0 : d[k]) * a.values()[p];
      for (index_t q = at.col_ptr()[k]; q < at.col_ptr()[k + 1]; ++q) {
        const index_t i = at.row_idx()[q];
        if (i < j) continue;
        if (mark[i] != j) {
          mark[i] = j;
          work[i] = 0.0;
          rows_in_col.push_back(i);
        }
        work[i] += w * at.values()[q];
      }
    }
    std::sort(rows_in_col.begin(), rows_in_col.end());
    for (index_t i : rows_in_col) {
      row_idx.push_back(i);
      values.push_back(work[i]);
    }
    col_ptr[j + 1] = static_cast<index_t>(row_idx.size());
  }
  return CscMatrix(n, n, std::move(col_ptr), std::move(row_idx),
                   std::move(values));
}

}  // namespace hkkt
