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

#ifndef HKKT_CHOLESKY_HPP_
#define HKKT_CHOLESKY_HPP_

#include <memory>
#include <variant>

#include "hkkt/csc_matrix.hpp"

namespace hkkt {

/// Pattern-only phase of sparse Cholesky of P A P^T: ordering, elimination
/// tree, and the exact pattern of L. Reusable across every matrix with the
/// same pattern; immutable after construction, safe to share across
/// threads (each numeric factorization owns its values).
struct SymbolicFactor {
  Permutation ordering;
  std::vector<index_t> parent;      // elimination tree over permuted indices
  std::vector<index_t> col_counts;  // nonzeros per column of L
  std::vector<index_t> l_col_ptr;   // L pattern, compressed-column
  std::vector<index_t> l_row_idx;   // sorted; diagonal first in each column

  index_t size() const { return static_cast<index_t>(parent.size()); }
  index_t l_nnz() const { return l_col_ptr.empty() ? 0 : l_col_ptr.back(); }
};

/// Elimination tree and exact L pattern for P A P^T. The pattern must be
/// square and structurally symmetric (it is symmetrized internally).
SymbolicFactor symbolic_cholesky(const CscMatrix& pattern,
                                 Permutation ordering);

/// Expected outcome when the matrix is not positive definite at the pivot
/// floor: carries the elimination-order column where the pivot candidate
/// fell to <= pivot_floor.
struct NotSpdFailure {
  index_t column;
  double pivot;
};

class NumericCholesky {
 public:
  NumericCholesky(std::shared_ptr<const SymbolicFactor> symbolic,
                  std::vector<double> l_values)
      : symbolic_(std::move(symbolic)), l_values_(std::move(l_values)) {}

  const SymbolicFactor& symbolic() const { return *symbolic_; }
  std::shared_ptr<const SymbolicFactor> symbolic_ptr() const {
    return symbolic_;
  }
  const std::vector<double>& l_values() const { return l_values_; }

 private:
  std::shared_ptr<const SymbolicFactor> symbolic_;
  std::vector<double> l_values_;  // aligned with symbolic's L pattern
};

using FactorizeResult = std::variant<NumericCholesky, NotSpdFailure>;

/// Left-looking simplicial Cholesky of a symmetric matrix in lower-triangle
/// storage, using a precomputed symbolic factor. No pivoting happens here;
/// a pivot candidate <= max(pivot_floor, 0) stops the factorization and
/// reports NotSpdFailure, which is a normal outcome, not an error. The
/// input pattern must be a subset of the symbolic pattern basis.
FactorizeResult numeric_cholesky(const CscMatrix& a_lower,
                                 std::shared_ptr<const SymbolicFactor> symbolic,
                                 double pivot_floor);

/// Solves A x = b through permute, forward solve, backward solve,
/// unpermute.
std::vector<double> factor_solve(const NumericCholesky& factor,
                                 std::span<const double> b);

}  // namespace hkkt

#endif  // HKKT_CHOLESKY_HPP_
