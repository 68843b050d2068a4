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

#ifndef HKKT_RUIZ_HPP_
#define HKKT_RUIZ_HPP_

#include <utility>

#include "hkkt/kkt_system.hpp"

namespace hkkt {

/// Symmetric two-sided equilibration state for the assembled operator
/// [[H_tilde, J^T], [J, 0]]. The same diagonal D = diag(d_left) scales both
/// sides: K_scaled = D K D, rhs_scaled = D rhs, and an unknown z of the
/// scaled system maps back as z = D z_scaled.
struct RuizScaling {
  std::vector<double> d_left;  // length n_x + m_c, strictly positive
  index_t iterations_used = 0;

  bool is_identity() const {
    for (double v : d_left) {
      if (v != 1.0) return false;
    }
    return true;
  }
};

struct ScaledReduced {
  Reduced2x2 system;
  RuizScaling scaling;
};

/// Iteratively divides rows and columns by the square roots of their
/// infinity norms until every row norm lies in [1 - tol, 1 + tol] or
/// max_iters sweeps have run. Structurally empty rows keep scale 1.
/// iterations_used counts norm sweeps including the converged check.
ScaledReduced ruiz_scale(const Reduced2x2& red, index_t max_iters, double tol);

/// Maps a solution of the scaled system back to the original unknowns.
std::pair<std::vector<double>, std::vector<double>> unscale_solution(
    const RuizScaling& scaling, std::span<const double> dx_scaled,
    std::span<const double> dy_scaled);

}  // namespace hkkt

#endif  // HKKT_RUIZ_HPP_
