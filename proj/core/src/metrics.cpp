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
#include <limits>

#include "hkkt/metrics.hpp"

namespace hkkt {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

ErrorReport error_report(const Operator& apply, std::span<const double> x,
                         std::span<const double> b, double a_norm_inf) {
  std::vector<double> residual = apply(x);
  if (residual.size() != b.size()) {
    throw InvalidMatrixError("error_report: operator output length mismatch");
  }
  for (std::size_t i = 0; i < b.size(); ++i) residual[i] -= b[i];

  ErrorReport rep;
  rep.a_norm_inf = a_norm_inf;
  rep.rhs_norm = norm2(b);
  rep.solution_norm = norm2(x);
  const double res = norm2(residual);
  const double be_den = a_norm_inf * rep.solution_norm + rep.rhs_norm;
  rep.be = (be_den > 0.0)
               ? res / be_den
               : (res == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  rep.rr = (rep.rhs_norm > 0.0)
               ? res / rep.rhs_norm
               : (res == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return rep;
}

double inf_norm(const CscMatrix& a) {
  std::vector<double> row_sum(a.rows(), 0.0);
  for (index_t j = 0; j < a.cols(); ++j) {
    for (index_t p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      row_sum[a.row_idx()[p]] += std::fabs(a.values()[p]);
    }
  }
  double m = 0.0;
  for (double v : row_sum) m = std::max(m, v);
  return m;
}

double inf_norm_symmetric(const CscMatrix& a_lower) {
  std::vector<double> row_sum(a_lower.rows(), 0.0);
  for (index_t j = 0; j < a_lower.cols(); ++j) {
    for (index_t p = a_lower.col_ptr()[j]; p < a_lower.col_ptr()[j + 1]; ++p) {
      const index_t i = a_lower.row_idx()[p];
      const double v = std::fabs(a_lower.values()[p]);
      row_sum[i] += v;
      if (i != j) row_sum[j] += v;
    }
  }
  double m = 0.0;
  for (double v : row_sum) m = std::max(m, v);
  return m;
}

namespace {

// Per-row absolute sums of H treated symmetrically with D added on the
// diagonal; the overlap is |H_ii + d_i|, every other entry contributes
// its own magnitude.
std::vector<double> sym_plus_diag_row_sums(const CscMatrix& h_lower,
                                           std::span<const double> d) {
  const index_t n = h_lower.cols();
  std::vector<double> diag(n, 0.0), off(n, 0.0);
  for (index_t j = 0; j < n; ++j) {
    for (index_t p = h_lower.col_ptr()[j]; p < h_lower.col_ptr()[j + 1]; ++p) {
      const index_t i = h_lower.row_idx()[p];
      const double v = h_lower.values()[p];
      if (i == j) {
        diag[i] += v;
      } else {
        off[i] += std::fabs(v);
        off[j] += std::fabs(v);
      }
    }
  }
  std::vector<double> sums(n);
  for (index_t i = 0; i < n; ++i) {
    sums[i] = off[i] + std::fabs(diag[i] + (d.empty() ? 0.0 : d[i]));
  }
  return sums;
}

void add_col_sums(const CscMatrix& a, std::vector<double>& target,
                  index_t offset) {
  for (index_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (index_t p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      s += std::fabs(a.values()[p]);
    }
    target[offset + j] += s;
  }
}

void add_row_sums(const CscMatrix& a, std::vector<double>& target,
                  index_t offset) {
  for (index_t j = 0; j < a.cols(); ++j) {
    for (index_t p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      target[offset + a.row_idx()[p]] += std::fabs(a.values()[p]);
    }
  }
}

}  // namespace

double inf_norm_kkt4x4(const BlockKkt4x4& sys) {
  const index_t nx = sys.n_x(), mc = sys.m_c(), md = sys.m_d();
  std::vector<double> sums(sys.total_size(), 0.0);

  // Rows 0..n_x: |H + D_x| + col sums of J and J_d.
  const std::vector<double> top = sym_plus_diag_row_sums(sys.h, sys.d_x);
  std::copy(top.begin(), top.end(), sums.begin());
  add_col_sums(sys.j, sums, 0);
  add_col_sums(sys.j_d, sums, 0);
  // Slack rows: D_s and -I.
  for (index_t i = 0; i < md; ++i) {
    sums[nx + i] = std::fabs(sys.d_s[i]) + 1.0;
  }
  // Equality rows: J.
  add_row_sums(sys.j, sums, nx + md);
  // Inequality rows: J_d and -I.
  add_row_sums(sys.j_d, sums, nx + md + mc);
  for (index_t i = 0; i < md; ++i) sums[nx + md + mc + i] += 1.0;

  double m = 0.0;
  for (double v : sums) m = std::max(m, v);
  return m;
}

double inf_norm_kkt2x2(const Reduced2x2& red) {
  const index_t nx = red.n_x(), mc = red.m_c();
  std::vector<double> sums(nx + mc, 0.0);
  const std::vector<double> top = sym_plus_diag_row_sums(red.h_tilde, {});
  std::copy(top.begin(), top.end(), sums.begin());
  add_col_sums(red.j, sums, 0);
  add_row_sums(red.j, sums, nx);
  double m = 0.0;
  for (double v : sums) m = std::max(m, v);
  return m;
}

std::vector<double> apply_kkt4x4(const BlockKkt4x4& sys,
                                 const FullSolution& sol) {
  const index_t nx = sys.n_x(), mc = sys.m_c(), md = sys.m_d();
  std::vector<double> out(sys.total_size(), 0.0);

  // Row 1: (H + D_x) dx + J^T dy + J_d^T dyd
  std::vector<double> r1 = symmetric_spmv(sys.h, sol.dx);
  for (index_t i = 0; i < nx; ++i) r1[i] += sys.d_x[i] * sol.dx[i];
  const std::vector<double> jt_dy = spmv(sys.j, sol.dy, true);
  const std::vector<double> jdt_dyd = spmv(sys.j_d, sol.dyd, true);
  for (index_t i = 0; i < nx; ++i) out[i] = r1[i] + jt_dy[i] + jdt_dyd[i];
  // Row 2: D_s ds - dyd
  for (index_t i = 0; i < md; ++i) {
    out[nx + i] = sys.d_s[i] * sol.ds[i] - sol.dyd[i];
  }
  // Row 3: J dx
  const std::vector<double> j_dx = spmv(sys.j, sol.dx);
  for (index_t i = 0; i < mc; ++i) out[nx + md + i] = j_dx[i];
  // Row 4: J_d dx - ds
  const std::vector<double> jd_dx = spmv(sys.j_d, sol.dx);
  for (index_t i = 0; i < md; ++i) {
    out[nx + md + mc + i] = jd_dx[i] - sol.ds[i];
  }
  return out;
}

std::vector<double> apply_kkt2x2(const Reduced2x2& red,
                                 std::span<const double> dx,
                                 std::span<const double> dy) {
  const index_t nx = red.n_x(), mc = red.m_c();
  std::vector<double> out(nx + mc, 0.0);
  const std::vector<double> h_dx = symmetric_spmv(red.h_tilde, dx);
  const std::vector<double> jt_dy = spmv(red.j, dy, true);
  for (index_t i = 0; i < nx; ++i) out[i] = h_dx[i] + jt_dy[i];
  const std::vector<double> j_dx = spmv(red.j, dx);
  for (index_t k = 0; k < mc; ++k) out[nx + k] = j_dx[k];
  return out;
}

ErrorReport error_report_kkt4x4(const BlockKkt4x4& sys,
                                const FullSolution& sol) {
  const index_t nx = sys.n_x(), mc = sys.m_c(), md = sys.m_d();
  std::vector<double> x;
  x.reserve(sys.total_size());
  x.insert(x.end(), sol.dx.begin(), sol.dx.end());
  x.insert(x.end(), sol.ds.begin(), sol.ds.end());
  x.insert(x.end(), sol.dy.begin(), sol.dy.end());
  x.insert(x.end(), sol.dyd.begin(), sol.dyd.end());
  const std::vector<double> b = sys.stacked_rhs();
  const Operator apply = [&sys, nx, mc, md](std::span<const double> z) {
    FullSolution s;
    s.dx.assign(z.begin(), z.begin() + nx);
    s.ds.assign(z.begin() + nx, z.begin() + nx + md);
    s.dy.assign(z.begin() + nx + md, z.begin() + nx + md + mc);
    s.dyd.assign(z.begin() + nx + md + mc, z.end());
    return apply_kkt4x4(sys, s);
  };
  return error_report(apply, x, b, inf_norm_kkt4x4(sys));
}

ErrorReport error_report_kkt2x2(const Reduced2x2& red,
                                std::span<const double> dx,
                                std::span<const double> dy) {
  const index_t nx = red.n_x();
  std::vector<double> x;
  x.reserve(nx + red.m_c());
  x.insert(x.end(), dx.begin(), dx.end());
  x.insert(x.end(), dy.begin(), dy.end());
  std::vector<double> b;
  b.reserve(nx + red.m_c());
  b.insert(b.end(), red.r_x.begin(), red.r_x.end());
  b.insert(b.end(), red.r_y.begin(), red.r_y.end());
  const Operator apply = [&red, nx](std::span<const double> z) {
    return apply_kkt2x2(red, z.subspan(0, nx), z.subspan(nx));
  };
  return error_report(apply, x, b, inf_norm_kkt2x2(red));
}

DensityReport density_report(const Reduced2x2& red,
                             const NumericCholesky& factor) {
  DensityReport rep;
  const index_t nx = red.n_x();
  const index_t h_diag = red.h_tilde.diag_entries();
  const index_t h_full = 2 * (red.h_tilde.nnz() - h_diag) + h_diag;
  rep.nnz_op = h_full + 2 * red.j.nnz() + nx;
  rep.nnz_fac = 2 * factor.symbolic().l_nnz();
  rep.ratio = rep.nnz_op > 0
                  ? static_cast<double>(rep.nnz_fac) / rep.nnz_op
                  : 0.0;
  rep.rho_c = nx > 0 ? static_cast<double>(rep.nnz_fac) / nx : 0.0;
  return rep;
}

std::vector<double> schur_spectrum(const Reduced2x2& red, double gamma) {
  const index_t nx = red.n_x(), mc = red.m_c();
  DenseMatrix hg = densify_symmetric(red.h_tilde);
  const DenseMatrix jd = densify(red.j);
  for (index_t i = 0; i < nx; ++i) {
    for (index_t j = 0; j < nx; ++j) {
      double acc = 0.0;
      for (index_t k = 0; k < mc; ++k) acc += jd(k, i) * jd(k, j);
      hg(i, j) += gamma * acc;
    }
  }
  {
    const std::vector<double> eig = dense_sym_eig(hg);
    if (eig.empty() || eig.front() <= 0.0) {
      throw SingularMatrixError("schur_spectrum: H_gamma is not SPD");
    }
  }
  // S = J H_gamma^{-1} J^T, one dense solve per column of J^T.
  DenseMatrix s(mc, mc);
  std::vector<double> col(nx);
  for (index_t k = 0; k < mc; ++k) {
    for (index_t i = 0; i < nx; ++i) col[i] = jd(k, i);
    const std::vector<double> w = dense_solve(hg, col);
    const std::vector<double> jw = jd.multiply(w);
    for (index_t r = 0; r < mc; ++r) s(r, k) = gamma * jw[r];
  }
  // Solver roundoff can leave S slightly asymmetric.
  for (index_t i = 0; i < mc; ++i) {
    for (index_t j = i + 1; j < mc; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return dense_sym_eig(s);
}

}  // namespace hkkt
