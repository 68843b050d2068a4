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

#ifndef HKKT_DENSE_HPP_
#define HKKT_DENSE_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include "hkkt/csc_matrix.hpp"

namespace hkkt {

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Row-major dense matrix. Brute-force oracle territory: everything here is
/// O(n^3) and meant for small test instances, never for the solve path.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t nrows, index_t ncols)
      : nrows_(nrows), ncols_(ncols), v_(nrows * ncols, 0.0) {}

  index_t rows() const { return nrows_; }
  index_t cols() const { return ncols_; }
  double& operator()(index_t i, index_t j) { return v_[i * ncols_ + j]; }
  double operator()(index_t i, index_t j) const { return v_[i * ncols_ + j]; }

  DenseMatrix transposed() const;
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<double> v_;
};

DenseMatrix densify(const CscMatrix& a);
/// Expands lower-triangle symmetric storage into a full dense matrix.
DenseMatrix densify_symmetric(const CscMatrix& a_lower);
DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError
/// when a pivot column is zero to working precision.
std::vector<double> dense_solve(DenseMatrix a, std::span<const double> b);

struct SymEig {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j pairs with values[j]
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<double> dense_sym_eig(const DenseMatrix& a);
SymEig dense_sym_eig_full(const DenseMatrix& a);

/// Numerical rank through elimination with complete pivoting. tol <= 0
/// selects 1e-10 times the largest absolute entry.
index_t dense_rank(DenseMatrix a, double tol);

}  // namespace hkkt

#endif  // HKKT_DENSE_HPP_
