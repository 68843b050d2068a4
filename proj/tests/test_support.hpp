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

// Instance builders and brute-force oracles shared by the test binaries.
// Everything here is independent of the sparse factorization path it is
// used to check.

#ifndef HKKT_TESTS_TEST_SUPPORT_HPP_
#define HKKT_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "hkkt/csc_matrix.hpp"
#include "hkkt/dense.hpp"
#include "hkkt/kkt_system.hpp"

namespace hkkt::testing {

struct TestRng {
  std::mt19937_64 engine;
  explicit TestRng(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) {
    const double u = (engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  index_t uniform_index(index_t n) {
    return static_cast<index_t>(engine() % static_cast<std::uint64_t>(n));
  }
};

inline CscMatrix random_sparse(index_t rows, index_t cols, index_t per_col,
                               TestRng& rng) {
  std::vector<Triplet> entries;
  for (index_t j = 0; j < cols; ++j) {
    std::set<index_t> seen;
    for (index_t t = 0; t < per_col && rows > 0; ++t) {
      const index_t i = rng.uniform_index(rows);
      if (!seen.insert(i).second) continue;
      entries.push_back({i, j, rng.uniform(-1.0, 1.0)});
    }
  }
  return CscMatrix::from_triplets(rows, cols, entries);
}

// Diagonally dominant symmetric matrix in lower storage: SPD with
// lambda_min at least `margin`.
inline CscMatrix random_spd_lower(index_t n, index_t offdiag_per_col,
                                  double margin, TestRng& rng) {
  std::vector<Triplet> entries;
  std::vector<double> row_abs(n, 0.0);
  for (index_t j = 0; j < n; ++j) {
    std::set<index_t> seen;
    for (index_t t = 0; t < offdiag_per_col; ++t) {
      if (j + 1 >= n) break;
      const index_t i = j + 1 + rng.uniform_index(n - j - 1);
      if (!seen.insert(i).second) continue;
      const double v = rng.uniform(-1.0, 1.0);
      entries.push_back({i, j, v});
      row_abs[i] += std::fabs(v);
      row_abs[j] += std::fabs(v);
    }
  }
  for (index_t i = 0; i < n; ++i) {
    entries.push_back({i, i, row_abs[i] + margin + rng.uniform(0.0, 1.0)});
  }
  return CscMatrix::from_triplets(n, n, entries);
}

// Lower pattern of a 5-point grid Laplacian on a rows x cols lattice.
inline CscMatrix grid_laplacian_lower(index_t grid_rows, index_t grid_cols) {
  const index_t n = grid_rows * grid_cols;
  std::vector<Triplet> entries;
  auto id = [grid_cols](index_t r, index_t c) { return r * grid_cols + c; };
  for (index_t r = 0; r < grid_rows; ++r) {
    for (index_t c = 0; c < grid_cols; ++c) {
      const index_t v = id(r, c);
      entries.push_back({v, v, 4.0});
      if (r + 1 < grid_rows) entries.push_back({id(r + 1, c), v, -1.0});
      if (c + 1 < grid_cols) entries.push_back({id(r, c + 1), v, -1.0});
    }
  }
  return CscMatrix::from_triplets(n, n, entries);
}

// Arrow pattern: dense row/column at `vertex` plus the full diagonal.
inline CscMatrix arrow_lower(index_t n, index_t vertex) {
  std::vector<Triplet> entries;
  for (index_t i = 0; i < n; ++i) {
    entries.push_back({i, i, 4.0 + static_cast<double>(i)});
    if (i != vertex) {
      entries.push_back(
          {std::max(i, vertex), std::min(i, vertex), 1.0});
    }
  }
  return CscMatrix::from_triplets(n, n, entries);
}

inline double frobenius(const DenseMatrix& a) {
  double acc = 0.0;
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
  }
  return std::sqrt(acc);
}

// Structural dense Cholesky pattern of P A P^T (boolean left-looking
// elimination; exact numeric zeros from cancellation count as nonzero).
inline std::vector<std::vector<bool>> dense_chol_pattern(
    const CscMatrix& pattern, const Permutation& ordering) {
  const index_t n = pattern.cols();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = pattern.col_ptr()[j]; p < pattern.col_ptr()[j + 1];
         ++p) {
      const index_t i = pattern.row_idx()[p];
      const index_t r = ordering.inverse[i];
      const index_t c = ordering.inverse[j];
      a[std::max(r, c)][std::min(r, c)] = true;
      a[r][r] = true;
      a[c][c] = true;
    }
  }
  std::vector<std::vector<bool>> l(n, std::vector<bool>(n, false));
  for (index_t j = 0; j < n; ++j) {
    for (index_t i = j; i < n; ++i) l[i][j] = a[i][j];
    l[j][j] = true;
    for (index_t t = 0; t < j; ++t) {
      if (!l[j][t]) continue;
      for (index_t i = j; i < n; ++i) {
        if (l[i][t]) l[i][j] = true;
      }
    }
  }
  return l;
}

// Dense assembly of the block systems for oracle solves.
inline DenseMatrix assemble_kkt2x2_dense(const Reduced2x2& red) {
  const index_t nx = red.n_x(), mc = red.m_c();
  DenseMatrix k(nx + mc, nx + mc);
  const DenseMatrix h = densify_symmetric(red.h_tilde);
  for (index_t i = 0; i < nx; ++i) {
    for (index_t j = 0; j < nx; ++j) k(i, j) = h(i, j);
  }
  const DenseMatrix jd = densify(red.j);
  for (index_t r = 0; r < mc; ++r) {
    for (index_t c = 0; c < nx; ++c) {
      k(nx + r, c) = jd(r, c);
      k(c, nx + r) = jd(r, c);
    }
  }
  return k;
}

inline DenseMatrix assemble_kkt4x4_dense(const BlockKkt4x4& sys) {
  const index_t nx = sys.n_x(), mc = sys.m_c(), md = sys.m_d();
  const index_t n = sys.total_size();
  DenseMatrix k(n, n);
  const DenseMatrix h = densify_symmetric(sys.h);
  for (index_t i = 0; i < nx; ++i) {
    for (index_t j = 0; j < nx; ++j) k(i, j) = h(i, j);
    k(i, i) += sys.d_x[i];
  }
  for (index_t i = 0; i < md; ++i) {
    k(nx + i, nx + i) = sys.d_s[i];
    k(nx + i, nx + md + mc + i) = -1.0;
    k(nx + md + mc + i, nx + i) = -1.0;
  }
  const DenseMatrix jd = densify(sys.j);
  for (index_t r = 0; r < mc; ++r) {
    for (index_t c = 0; c < nx; ++c) {
      k(nx + md + r, c) = jd(r, c);
      k(c, nx + md + r) = jd(r, c);
    }
  }
  const DenseMatrix jdd = densify(sys.j_d);
  for (index_t r = 0; r < md; ++r) {
    for (index_t c = 0; c < nx; ++c) {
      k(nx + md + mc + r, c) = jdd(r, c);
      k(c, nx + md + mc + r) = jdd(r, c);
    }
  }
  return k;
}

inline DenseMatrix dense_h_gamma(const Reduced2x2& red, double gamma) {
  const index_t nx = red.n_x();
  DenseMatrix h = densify_symmetric(red.h_tilde);
  const DenseMatrix jd = densify(red.j);
  for (index_t i = 0; i < nx; ++i) {
    for (index_t j = 0; j < nx; ++j) {
      double acc = 0.0;
      for (index_t k = 0; k < red.m_c(); ++k) acc += jd(k, i) * jd(k, j);
      h(i, j) += gamma * acc;
    }
  }
  return h;
}

// Orthonormal basis of null(J) from the eigenvectors of J^T J.
inline DenseMatrix nullspace_basis(const CscMatrix& j) {
  const index_t n = j.cols();
  const DenseMatrix jd = densify(j);
  DenseMatrix jtj(n, n);
  for (index_t a = 0; a < n; ++a) {
    for (index_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (index_t k = 0; k < j.rows(); ++k) acc += jd(k, a) * jd(k, b);
      jtj(a, b) = acc;
    }
  }
  const SymEig eig = dense_sym_eig_full(jtj);
  const double tol = 1e-10 * std::max(1.0, eig.values.back());
  index_t dim = 0;
  while (dim < n && eig.values[dim] <= tol) ++dim;
  DenseMatrix z(n, dim);
  for (index_t k = 0; k < dim; ++k) {
    for (index_t i = 0; i < n; ++i) z(i, k) = eig.vectors(i, k);
  }
  return z;
}

// Smallest eigenvalue above the rank tolerance (lambda_min_star).
inline double min_nonzero_eig(const std::vector<double>& eig) {
  const double tol = 1e-10 * std::max(1.0, std::fabs(eig.back()));
  for (double v : eig) {
    if (v > tol) return v;
  }
  return 0.0;
}

// An H_tilde that is indefinite overall yet positive definite on null(J):
// a diagonally dominant base minus alpha y y^T with y in range(J^T).
// j_scale shrinks J's values, pushing gamma_min = -lambda_min /
// lambda_min*(J^T J) up.
struct PdOnNullInstance {
  Reduced2x2 red;
  double gamma_min = 0.0;     // oracle-computed
  double lambda_min = 0.0;    // of H_tilde
};

inline PdOnNullInstance make_pd_on_null(index_t nx, index_t mc,
                                        double j_scale, TestRng& rng) {
  PdOnNullInstance out;
  CscMatrix j;
  {
    std::vector<Triplet> entries;
    for (index_t r = 0; r < mc; ++r) {
      std::set<index_t> cols;
      while (static_cast<index_t>(cols.size()) < std::min<index_t>(3, nx)) {
        cols.insert(rng.uniform_index(nx));
      }
      for (index_t c : cols) {
        entries.push_back({r, c, j_scale * rng.uniform(0.2, 1.0) *
                                     (rng.uniform(0.0, 1.0) < 0.5 ? -1 : 1)});
      }
    }
    j = CscMatrix::from_triplets(mc, nx, entries);
  }

  const CscMatrix h0 = random_spd_lower(nx, 3, 0.5, rng);
  // y = first row of J
  std::vector<double> y(nx, 0.0);
  for (index_t c = 0; c < nx; ++c) {
    for (index_t p = j.col_ptr()[c]; p < j.col_ptr()[c + 1]; ++p) {
      if (j.row_idx()[p] == 0) y[c] = j.values()[p];
    }
  }
  const std::vector<double> hy = symmetric_spmv(h0, y);
  double quad = 0.0, ynorm2 = 0.0;
  for (index_t i = 0; i < nx; ++i) {
    quad += y[i] * hy[i];
    ynorm2 += y[i] * y[i];
  }
  const double alpha = 1.5 * quad / (ynorm2 * ynorm2);

  std::vector<Triplet> entries;
  for (index_t c = 0; c < nx; ++c) {
    for (index_t p = h0.col_ptr()[c]; p < h0.col_ptr()[c + 1]; ++p) {
      entries.push_back({h0.row_idx()[p], c, h0.values()[p]});
    }
  }
  for (index_t a = 0; a < nx; ++a) {
    if (y[a] == 0.0) continue;
    for (index_t b = 0; b <= a; ++b) {
      if (y[b] == 0.0) continue;
      entries.push_back({a, b, -alpha * y[a] * y[b]});
    }
  }
  out.red.h_tilde = CscMatrix::from_triplets(nx, nx, entries);
  out.red.j = std::move(j);
  out.red.r_x.resize(nx);
  out.red.r_y.resize(mc);
  for (index_t i = 0; i < nx; ++i) out.red.r_x[i] = rng.uniform(-1.0, 1.0);
  for (index_t k = 0; k < mc; ++k) out.red.r_y[k] = rng.uniform(-1.0, 1.0);

  const DenseMatrix ht = densify_symmetric(out.red.h_tilde);
  out.lambda_min = dense_sym_eig(ht).front();
  const DenseMatrix jd = densify(out.red.j);
  DenseMatrix jtj(nx, nx);
  for (index_t a = 0; a < nx; ++a) {
    for (index_t b = 0; b < nx; ++b) {
      double acc = 0.0;
      for (index_t k = 0; k < mc; ++k) acc += jd(k, a) * jd(k, b);
      jtj(a, b) = acc;
    }
  }
  const double lmin_star = min_nonzero_eig(dense_sym_eig(jtj));
  out.gamma_min = lmin_star > 0.0 ? -out.lambda_min / lmin_star : 0.0;
  return out;
}

// H_tilde with negative curvature inside null(J): J leaves one column
// structurally untouched and H_tilde's diagonal there is negative.
inline Reduced2x2 make_negative_null(index_t nx, index_t mc, TestRng& rng) {
  Reduced2x2 red;
  const index_t hole = nx - 1;
  std::vector<Triplet> jt;
  for (index_t r = 0; r < mc; ++r) {
    std::set<index_t> cols;
    while (static_cast<index_t>(cols.size()) < std::min<index_t>(3, nx - 1)) {
      const index_t c = rng.uniform_index(nx);
      if (c != hole) cols.insert(c);
    }
    for (index_t c : cols) jt.push_back({r, c, rng.uniform(0.2, 1.0)});
  }
  red.j = CscMatrix::from_triplets(mc, nx, jt);

  const CscMatrix h0 = random_spd_lower(nx, 3, 0.5, rng);
  std::vector<Triplet> entries;
  for (index_t c = 0; c < nx; ++c) {
    for (index_t p = h0.col_ptr()[c]; p < h0.col_ptr()[c + 1]; ++p) {
      const index_t i = h0.row_idx()[p];
      double v = h0.values()[p];
      if (i == hole && c == hole) v = -1.0;  // negative null direction
      entries.push_back({i, c, v});
    }
  }
  red.h_tilde = CscMatrix::from_triplets(nx, nx, entries);
  red.r_x.assign(nx, 0.0);
  red.r_y.assign(mc, 0.0);
  for (auto& v : red.r_x) v = rng.uniform(-1.0, 1.0);
  for (auto& v : red.r_y) v = rng.uniform(-1.0, 1.0);
  return red;
}

}  // namespace hkkt::testing

#endif  // HKKT_TESTS_TEST_SUPPORT_HPP_
