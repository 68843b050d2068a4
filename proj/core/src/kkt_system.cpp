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

#include <cmath>

#include "hkkt/kkt_system.hpp"

namespace hkkt {

namespace {

void check_diag(const std::vector<double>& d, const char* name) {
  for (double v : d) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidMatrixError(std::string(name) +
                               " must be nonnegative and finite");
    }
  }
}

}  // namespace

void BlockKkt4x4::validate() const {
  if (!h.is_square()) throw InvalidMatrixError("H must be square");
  const index_t nx = h.cols(), mc = j.rows(), md = j_d.rows();
  if (j.cols() != nx) throw InvalidMatrixError("J column count must be n_x");
  if (j_d.cols() != nx) {
    throw InvalidMatrixError("J_d column count must be n_x");
  }
  if (static_cast<index_t>(d_x.size()) != nx ||
      static_cast<index_t>(r_tilde_x.size()) != nx) {
    throw InvalidMatrixError("D_x and r_tilde_x must have length n_x");
  }
  if (static_cast<index_t>(d_s.size()) != md ||
      static_cast<index_t>(r_s.size()) != md ||
      static_cast<index_t>(r_yd.size()) != md) {
    throw InvalidMatrixError("D_s, r_s, r_yd must have length m_d");
  }
  if (static_cast<index_t>(r_y.size()) != mc) {
    throw InvalidMatrixError("r_y must have length m_c");
  }
  check_diag(d_x, "D_x");
  check_diag(d_s, "D_s");
}

std::vector<double> BlockKkt4x4::stacked_rhs() const {
  std::vector<double> r;
  r.reserve(total_size());
  r.insert(r.end(), r_tilde_x.begin(), r_tilde_x.end());
  r.insert(r.end(), r_s.begin(), r_s.end());
  r.insert(r.end(), r_y.begin(), r_y.end());
  r.insert(r.end(), r_yd.begin(), r_yd.end());
  return r;
}

Reduced2x2 reduce(const BlockKkt4x4& sys) {
  sys.validate();

  // H_tilde = H + diag(D_x) + J_d^T D_s J_d, assembled on the symbolic
  // union pattern so every system of a pattern-uniform sequence shares it.
  const CscMatrix jdt_ds_jd = ata_lower(sys.j_d, sys.d_s);
  const CscMatrix* terms[] = {&sys.h, &jdt_ds_jd};
  const double coeffs[] = {1.0, 1.0};
  Reduced2x2 red;
  red.h_tilde = add_symmetric_lower(terms, coeffs, sys.d_x);
  red.j = sys.j;

  // r_x = r_tilde_x + J_d^T (D_s r_yd + r_s)
  std::vector<double> t(sys.m_d());
  for (index_t i = 0; i < sys.m_d(); ++i) {
    t[i] = sys.d_s[i] * sys.r_yd[i] + sys.r_s[i];
  }
  red.r_x = spmv(sys.j_d, t, /*transpose=*/true);
  for (index_t i = 0; i < sys.n_x(); ++i) red.r_x[i] += sys.r_tilde_x[i];
  red.r_y = sys.r_y;
  return red;
}

FullSolution recover(const BlockKkt4x4& sys, std::vector<double> dx,
                     std::vector<double> dy) {
  if (static_cast<index_t>(dx.size()) != sys.n_x() ||
      static_cast<index_t>(dy.size()) != sys.m_c()) {
    throw InvalidMatrixError("recover: dx/dy dimension mismatch");
  }
  FullSolution full;
  full.ds = spmv(sys.j_d, dx);
  for (index_t i = 0; i < sys.m_d(); ++i) full.ds[i] -= sys.r_yd[i];
  full.dyd.resize(sys.m_d());
  for (index_t i = 0; i < sys.m_d(); ++i) {
    full.dyd[i] = sys.d_s[i] * full.ds[i] - sys.r_s[i];
  }
  full.dx = std::move(dx);
  full.dy = std::move(dy);
  return full;
}

}  // namespace hkkt
