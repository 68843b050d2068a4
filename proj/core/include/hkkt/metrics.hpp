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

#ifndef HKKT_METRICS_HPP_
#define HKKT_METRICS_HPP_

#include <functional>

#include "hkkt/cholesky.hpp"
#include "hkkt/dense.hpp"
#include "hkkt/kkt_system.hpp"

namespace hkkt {

/// Backward error BE = ||Ax - b|| / (||A|| ||x|| + ||b||) and relative
/// residual RR = ||Ax - b|| / ||b||, with the infinity norm standing in
/// for ||A||. Norms of the inputs are kept for reporting.
struct ErrorReport {
  double be = 0.0;
  double rr = 0.0;
  double a_norm_inf = 0.0;
  double rhs_norm = 0.0;
  double solution_norm = 0.0;
};

using Operator = std::function<std::vector<double>(std::span<const double>)>;

/// Evaluates BE and RR for x against b under the given operator. A zero
/// rhs with a zero solution reports BE = RR = 0.
ErrorReport error_report(const Operator& apply, std::span<const double> x,
                         std::span<const double> b, double a_norm_inf);

double inf_norm(const CscMatrix& a);
double inf_norm_symmetric(const CscMatrix& a_lower);
/// Exact infinity norms of the assembled block operators, without
/// materializing them. Overlapping diagonal entries are summed first.
double inf_norm_kkt4x4(const BlockKkt4x4& sys);
double inf_norm_kkt2x2(const Reduced2x2& red);

/// K4 * (dx, ds, dy, dyd) stacked, for residual evaluation on Eq-form 4x4.
std::vector<double> apply_kkt4x4(const BlockKkt4x4& sys,
                                 const FullSolution& sol);
/// [[H_tilde, J^T],[J, 0]] * (dx, dy) stacked.
std::vector<double> apply_kkt2x2(const Reduced2x2& red,
                                 std::span<const double> dx,
                                 std::span<const double> dy);

ErrorReport error_report_kkt4x4(const BlockKkt4x4& sys,
                                const FullSolution& sol);
ErrorReport error_report_kkt2x2(const Reduced2x2& red,
                                std::span<const double> dx,
                                std::span<const double> dy);

/// Operator/factor multiplication counts:
///   nnz_op  = nnz(H_tilde) + 2 nnz(J) + n_x       (apply as operator)
///   nnz_fac = 2 nnz(L)                            (solve with the factor)
/// nnz(H_tilde) counts the full symmetric matrix, not just the stored
/// triangle. rho_c = nnz_fac / n_x.
struct DensityReport {
  double rho_c = 0.0;
  index_t nnz_op = 0;
  index_t nnz_fac = 0;
  double ratio = 0.0;
};

DensityReport density_report(const Reduced2x2& red,
                             const NumericCholesky& factor);

/// Eigenvalues of gamma * J H_gamma^{-1} J^T by dense factorization;
/// oracle-scale only. Throws SingularMatrixError when H_gamma is not SPD.
std::vector<double> schur_spectrum(const Reduced2x2& red, double gamma);

double norm2(std::span<const double> v);

}  // namespace hkkt

#endif  // HKKT_METRICS_HPP_
