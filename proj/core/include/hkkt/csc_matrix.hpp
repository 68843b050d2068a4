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

#ifndef HKKT_CSC_MATRIX_HPP_
#define HKKT_CSC_MATRIX_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkkt {

using index_t = std::int64_t;

/// Thrown for malformed inputs: dimension mismatches, broken column
/// pointers, out-of-range indices.
class InvalidMatrixError : public std::invalid_argument {
 public:
  explicit InvalidMatrixError(const std::string& what)
      : std::invalid_argument(what) {}
};

struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Sparse matrix in compressed-column storage. Row indices are strictly
/// increasing within each column and duplicates are forbidden; symmetric
/// matrices store the lower triangle only (see the *_symmetric helpers).
/// Instances are immutable after construction.
class CscMatrix {
 public:
  CscMatrix() = default;

  /// Empty nrows x ncols matrix (no stored entries).
  CscMatrix(index_t nrows, index_t ncols);

  /// Takes ownership of fully formed CSC arrays. Validates the storage
  /// invariants and throws InvalidMatrixError on violation.
  CscMatrix(index_t nrows, index_t ncols, std::vector<index_t> col_ptr,
            std::vector<index_t> row_idx, std::vector<double> values);

  /// Builds from unordered triplets. Duplicate (row, col) pairs are summed.
  static CscMatrix from_triplets(index_t nrows, index_t ncols,
                                 std::span<const Triplet> entries);

  index_t rows() const { return nrows_; }
  index_t cols() const { return ncols_; }
  index_t nnz() const { return static_cast<index_t>(row_idx_.size()); }
  bool is_square() const { return nrows_ == ncols_; }

  const std::vector<index_t>& col_ptr() const { return col_ptr_; }
  const std::vector<index_t>& row_idx() const { return row_idx_; }
  const std::vector<double>& values() const { return values_; }

  index_t col_begin(index_t j) const { return col_ptr_[j]; }
  index_t col_end(index_t j) const { return col_ptr_[j + 1]; }

  /// A^T. With values = false the result carries the pattern only
  /// (values all zero); the output columns are sorted either way.
  CscMatrix transpose(bool with_values = true) const;

  /// Pattern of A + A^T on a square matrix, diagonal included, values zero.
  CscMatrix symmetrized_pattern() const;

  /// Expands lower-triangle symmetric storage into an ordinary full matrix.
  CscMatrix full_from_lower() const;

  /// Stored entry count on the diagonal (used by density accounting).
  index_t diag_entries() const;

  bool same_pattern_as(const CscMatrix& other) const;

 private:
  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<index_t> col_ptr_ = {0};
  std::vector<index_t> row_idx_;
  std::vector<double> values_;
};

struct Permutation {
  std::vector<index_t> perm;     // new position i holds original index perm[i]
  std::vector<index_t> inverse;  // inverse[perm[i]] = i

  index_t size() const { return static_cast<index_t>(perm.size()); }

  static Permutation identity(index_t n);
  /// Validates bijectivity and fills in the inverse.
  static Permutation from_vector(std::vector<index_t> perm);
};

/// y = A*x, or A^T*x when transpose is set.
std::vector<double> spmv(const CscMatrix& a, std::span<const double> x,
                         bool transpose = false);

/// y = (L + L^T - diag(L)) * x for a symmetric matrix stored as its
/// lower triangle.
std::vector<double> symmetric_spmv(const CscMatrix& a_lower,
                                   std::span<const double> x);

/// Sum of sparse lower-triangle symmetric matrices plus a diagonal:
/// coeff[0]*terms[0] + ... + diag(d). The result keeps the full union
/// pattern with an entry on every diagonal position, so repeated sums
/// with different values share one pattern.
CscMatrix add_symmetric_lower(std::span<const CscMatrix* const> terms,
                              std::span<const double> coeffs,
                              std::span<const double> diag);

/// Lower triangle of A^T * diag(d) * A, computed sparsely. d may be empty
/// (treated as ones). The pattern is the full structural product pattern,
/// independent of the numeric values of d.
CscMatrix ata_lower(const CscMatrix& a, std::span<const double> d);

}  // namespace hkkt

#endif  // HKKT_CSC_MATRIX_HPP_
