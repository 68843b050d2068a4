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

#ifndef HKKT_KKT_SYSTEM_HPP_
#define HKKT_KKT_SYSTEM_HPP_

#include <vector>

#include "hkkt/csc_matrix.hpp"

namespace hkkt {

/// One block-4x4 interior-method step system
///
///   [ H + D_x   0     J^T   J_d^T ] [ dx  ]   [ r_tilde_x ]
///   [ 0         D_s   0     -I    ] [ ds  ] = [ r_s       ]
///   [ J         0     0     0     ] [ dy  ]   [ r_y       ]
///   [ J_d       -I    0     0     ] [ dyd ]   [ r_yd      ]
///
/// H is symmetric in lower-triangle storage; D_x and D_s are nonnegative
/// diagonals stored as vectors.
struct BlockKkt4x4 {
  CscMatrix h;    // n_x x n_x, lower triangle
  CscMatrix j;    // m_c x n_x
  CscMatrix j_d;  // m_d x n_x
  std::vector<double> d_x;
  std::vector<double> d_s;
  std::vector<double> r_tilde_x;
  std::vector<double> r_s;
  std::vector<double> r_y;
  std::vector<double> r_yd;

  index_t n_x() const { return h.cols(); }
  index_t m_c() const { return j.rows(); }
  index_t m_d() const { return j_d.rows(); }
  index_t total_size() const { return n_x() + 2 * m_d() + m_c(); }

  /// Throws InvalidMatrixError when dimensions disagree or a diagonal is
  /// negative or non-finite.
  void validate() const;

  /// RHS stacked in (r_tilde_x, r_s, r_y, r_yd) order.
  std::vector<double> stacked_rhs() const;
};

/// The reduced saddle-point system [[H_tilde, J^T], [J, 0]] with
/// H_tilde = H + diag(D_x) + J_d^T diag(D_s) J_d.
struct Reduced2x2 {
  CscMatrix h_tilde;  // n_x x n_x, lower triangle, full diagonal present
  CscMatrix j;        // m_c x n_x
  std::vector<double> r_x;
  std::vector<double> r_y;

  index_t n_x() const { return h_tilde.cols(); }
  index_t m_c() const { return j.rows(); }
};

struct FullSolution {
  std::vector<double> dx;
  std::vector<double> ds;
  std::vector<double> dy;
  std::vector<double> dyd;
};

/// Eliminates the slack and inequality-multiplier blocks.
Reduced2x2 reduce(const BlockKkt4x4& sys);

/// Back-substitutes ds = J_d dx - r_yd and dyd = D_s ds - r_s.
FullSolution recover(const BlockKkt4x4& sys, std::vector<double> dx,
                     std::vector<double> dy);

}  // namespace hkkt

#endif  // HKKT_KKT_SYSTEM_HPP_
