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

#include "hkkt/dense.hpp"

namespace hkkt {

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(ncols_, nrows_);
  for (index_t i = 0; i < nrows_; ++i) {
    for (index_t j = 0; j < ncols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<index_t>(x.size()) != ncols_) {
    throw InvalidMatrixError("DenseMatrix::multiply dimension mismatch");
  }
  std::vector<double> y(nrows_, 0.0);
  for (index_t i = 0; i < nrows_; ++i) {
    double acc = 0.0;
    for (index_t j = 0; j < ncols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

DenseMatrix densify(const CscMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  for (index_t j = 0; j < a.cols(); ++j) {
    for (index_t p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      d(a.row_idx()[p], j) = a.values()[p];
    }
  }
  return d;
}

DenseMatrix densify_symmetric(const CscMatrix& a_lower) {
  if (!a_lower.is_square()) {
    throw InvalidMatrixError("densify_symmetric requires a square matrix");
  }
  DenseMatrix d(a_lower.rows(), a_lower.cols());
  for (index_t j = 0; j < a_lower.cols(); ++j) {
    for (index_t p = a_lower.col_ptr()[j]; p < a_lower.col_ptr()[j + 1]; ++p) {
      const index_t i = a_lower.row_idx()[p];
      if (i < j) {
        throw InvalidMatrixError(
            "densify_symmetric: entry above diagonal in lower storage");
      }
      d(i, j) = a_lower.values()[p];
      d(j, i) = a_lower.values()[p];
    }
  }
  return d;
}

DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidMatrixError("dense_multiply dimension mismatch");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (index_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> dense_solve(DenseMatrix a, std::span<const double> b) {
  if (a.rows() != a.cols()) {
    throw InvalidMatrixError("dense_solve requires a square matrix");
  }
  const index_t n = a.rows();
  if (static_cast<index_t>(b.size()) != n) {
    throw InvalidMatrixError("dense_solve: rhs length mismatch");
  }
  std::vector<double> x(b.begin(), b.end());

  double max_entry = 0.0;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      max_entry = std::max(max_entry, std::fabs(a(i, j)));
    }
  }
  const double singular_tol = 1e-300 + max_entry * n * 1e-16;

  for (index_t k = 0; k < n; ++k) {
    index_t piv = k;
    for (index_t i = k + 1; i < n; ++i) {
      if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
    }
    if (std::fabs(a(piv, k)) <= singular_tol) {
      throw SingularMatrixError(
          "dense_solve: matrix singular to working precision at column " +
          std::to_string(k));
    }
    if (piv != k) {
      for (index_t j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(x[k], x[piv]);
    }
    const double pivot = a(k, k);
    for (index_t i = k + 1; i < n; ++i) {
      const double m = a(i, k) / pivot;
      if (m == 0.0) continue;
      a(i, k) = 0.0;
      for (index_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
      x[i] -= m * x[k];
    }
  }
  for (index_t k = n - 1; k >= 0; --k) {
    double acc = x[k];
    for (index_t j = k + 1; j < n; ++j) acc -= a(k, j) * x[j];
    x[k] = acc / a(k, k);
  }
  return x;
}

namespace {

SymEig jacobi_eigen(DenseMatrix a, bool want_vectors) {
  if (a.rows() != a.cols()) {
    throw InvalidMatrixError("dense_sym_eig requires a square matrix");
  }
  const index_t n = a.rows();
  double asym = 0.0, scale = 0.0;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      asym = std::max(asym, std::fabs(a(i, j) - a(j, i)));
      scale = std::max(scale, std::fabs(a(i, j)));
    }
  }
  if (asym > 1e-12 * std::max(scale, 1.0)) {
    throw InvalidMatrixError("dense_sym_eig: matrix is not symmetric");
  }

  DenseMatrix v(n, n);
  for (index_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (index_t p = 0; p < n; ++p) {
      for (index_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-15 * std::max(scale, 1e-300) * n) break;
    for (index_t p = 0; p < n; ++p) {
      for (index_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (index_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (index_t j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        if (want_vectors) {
          for (index_t i = 0; i < n; ++i) {
            const double vip = v(i, p), viq = v(i, q);
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
        }
      }
    }
  }

  std::vector<index_t> order(n);
  std::iota(order.begin(), order.end(), index_t{0});
  std::sort(order.begin(), order.end(),
            [&](index_t i, index_t j) { return a(i, i) < a(j, j); });

  SymEig out;
  out.values.resize(n);
  for (index_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
  if (want_vectors) {
    out.vectors = DenseMatrix(n, n);
    for (index_t k = 0; k < n; ++k) {
      for (index_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
  }
  return out;
}

}  // namespace

std::vector<double> dense_sym_eig(const DenseMatrix& a) {
  return jacobi_eigen(a, false).values;
}

SymEig dense_sym_eig_full(const DenseMatrix& a) {
  return jacobi_eigen(a, true);
}

index_t dense_rank(DenseMatrix a, double tol) {
  const index_t m = a.rows(), n = a.cols();
  double max_entry = 0.0;
  for (index_t i = 0; i < m; ++i) {
    for (index_t j = 0; j < n; ++j) {
      max_entry = std::max(max_entry, std::fabs(a(i, j)));
    }
  }
  const double threshold = tol > 0.0 ? tol : 1e-10 * max_entry;
  if (max_entry == 0.0) return 0;

  const index_t steps = std::min(m, n);
  index_t rank = 0;
  for (index_t k = 0; k < steps; ++k) {
    index_t pi = k, pj = k;
    double best = 0.0;
    for (index_t i = k; i < m; ++i) {
      for (index_t j = k; j < n; ++j) {
        if (std::fabs(a(i, j)) > best) {
          best = std::fabs(a(i, j));
          pi = i;
          pj = j;
        }
      }
    }
    if (best <= threshold) break;
    ++rank;
    if (pi != k) {
      for (index_t j = 0; j < n; ++j) std::swap(a(k, j), a(pi, j));
    }
    if (pj != k) {
      for (index_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, pj));
    }
    for (index_t i = k + 1; i < m; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (index_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return rank;
}

}  // namespace hkkt
