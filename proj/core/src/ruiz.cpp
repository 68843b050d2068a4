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

#include "hkkt/ruiz.hpp"

namespace hkkt {

namespace {

// Row infinity norms of diag(d) * [[H_tilde, J^T], [J, 0]] * diag(d),
// computed from the sparse blocks. H_tilde contributes to rows [0, n_x)
// through both triangles; J couples rows [n_x, n_x + m_c) and columns.
std::vector<double> scaled_row_norms(const Reduced2x2& red,
                                     const std::vector<double>& d) {
  const index_t nx = red.n_x(), mc = red.m_c();
  std::vector<double> norms(nx + mc, 0.0);
  const auto& h = red.h_tilde;
  for (index_t jcol = 0; jcol < nx; ++jcol) {
    for (index_t p = h.col_ptr()[jcol]; p < h.col_ptr()[jcol + 1]; ++p) {
      const index_t i = h.row_idx()[p];
      const double v = std::fabs(h.values()[p]) * d[i] * d[jcol];
      norms[i] = std::max(norms[i], v);
      if (i != jcol) norms[jcol] = std::max(norms[jcol], v);
    }
  }
  const auto& jm = red.j;
  for (index_t jcol = 0; jcol < nx; ++jcol) {
    for (index_t p = jm.col_ptr()[jcol]; p < jm.col_ptr()[jcol + 1]; ++p) {
      const index_t k = jm.row_idx()[p];
      const double v = std::fabs(jm.values()[p]) * d[nx + k] * d[jcol];
      norms[nx + k] = std::max(norms[nx + k], v);
      norms[jcol] = std::max(norms[jcol], v);
    }
  }
  return norms;
}

CscMatrix scale_symmetric(const CscMatrix& h, const std::vector<double>& d) {
  std::vector<double> values(h.values());
  for (index_t jcol = 0; jcol < h.cols(); ++jcol) {
    for (index_t p = h.col_ptr()[jcol]; p < h.col_ptr()[jcol + 1]; ++p) {
      values[p] *= d[h.row_idx()[p]] * d[jcol];
    }
  }
  return CscMatrix(h.rows(), h.cols(), h.col_ptr(), h.row_idx(),
                   std::move(values));
}

CscMatrix scale_rows_cols(const CscMatrix& a, const std::vector<double>& row,
                          const std::vector<double>& col) {
  std::vector<double> values(a.values());
  for (index_t jcol = 0; jcol < a.cols(); ++jcol) {
    for (index_t p = a.col_ptr()[jcol]; p < a.col_ptr()[jcol + 1]; ++p) {
      values[p] *= row[a.row_idx()[p]] * col[jcol];
    }
  }
  return CscMatrix(a.rows(), a.cols(), a.col_ptr(), a.row_idx(),
                   std::move(values));
}

}  // namespace

ScaledReduced ruiz_scale(const Reduced2x2& red, index_t max_iters,
                         double tol) {
  const index_t nx = red.n_x(), mc = red.m_c();
  if (static_cast<index_t>(red.r_x.size()) != nx ||
      static_cast<index_t>(red.r_y.size()) != mc) {
    throw InvalidMatrixError("ruiz_scale: rhs dimension mismatch");
  }
  std::vector<double> d(nx + mc, 1.0);

  index_t sweeps = 0;
  for (index_t it = 1; it <= max_iters; ++it) {
    sweeps = it;
    const std::vector<double> norms = scaled_row_norms(red, d);
    bool converged = true;
    for (double v : norms) {
      if (v > 0.0 && std::fabs(v - 1.0) > tol) {
        converged = false;
        break;
      }
    }
    if (converged) break;
    for (index_t i = 0; i < nx + mc; ++i) {
      if (norms[i] > 0.0) d[i] /= std::sqrt(norms[i]);
      // structurally empty row: scale stays 1
    }
  }

  ScaledReduced out;
  out.scaling.d_left = d;
  out.scaling.iterations_used = sweeps;

  std::vector<double> d1(d.begin(), d.begin() + nx);
  std::vector<double> d2(d.begin() + nx, d.end());
  out.system.h_tilde = scale_symmetric(red.h_tilde, d1);
  out.system.j = scale_rows_cols(red.j, d2, d1);
  out.system.r_x.resize(nx);
  for (index_t i = 0; i < nx; ++i) out.system.r_x[i] = d1[i] * red.r_x[i];
  out.system.r_y.resize(mc);
  for (index_t k = 0; k < mc; ++k) out.system.r_y[k] = d2[k] * red.r_y[k];
  return out;
}

std::pair<std::vector<double>, std::vector<double>> unscale_solution(
    const RuizScaling& scaling, std::span<const double> dx_scaled,
    std::span<const double> dy_scaled) {
  const index_t total = static_cast<index_t>(scaling.d_left.size());
  const index_t nx = static_cast<index_t>(dx_scaled.size());
  const index_t mc = static_cast<index_t>(dy_scaled.size());
  if (nx + mc != total) {
    throw InvalidMatrixError("unscale_solution: dimension mismatch");
  }
  std::vector<double> dx(nx), dy(mc);
  for (index_t i = 0; i < nx; ++i) dx[i] = scaling.d_left[i] * dx_scaled[i];
  for (index_t k = 0; k < mc; ++k) {
    dy[k] = scaling.d_left[nx + k] * dy_scaled[k];
  }
  return {std::move(dx), std::move(dy)};
}

}  // namespace hkkt
