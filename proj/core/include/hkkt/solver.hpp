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

#ifndef HKKT_SOLVER_HPP_
#define HKKT_SOLVER_HPP_

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "hkkt/cholesky.hpp"
#include "hkkt/kkt_system.hpp"
#include "hkkt/metrics.hpp"
#include "hkkt/ruiz.hpp"

namespace hkkt {

struct SolverConfig {
  double gamma = 1e4;
  double delta_min = 1e-9;
  double delta_max = 1e-6;
  double delta2 = 1e-9;
  double cg_tol = 1e-12;  // relative residual
  index_t cg_max_iter = 500;
  /// Relative curvature p^T S p / p^T p below which CG aborts and the
  /// caller restarts with the delta2 shift.
  double small_quadratic_threshold = 1e-12;
  /// Pivot floor relative to the largest diagonal magnitude of the matrix
  /// being factorized.
  double pivot_floor = 1e-13;
  double ruiz_tol = 0.01;
  index_t ruiz_max_iters = 20;
  /// Solve the matrices of a sequence concurrently. Forgoes the
  /// delta_min carry-over between matrices, so results can differ from
  /// the sequential schedule on matrices that need regularization.
  bool parallel_sequence = false;

  void validate() const;
};

/// The delta_1 ladder state. delta1 restarts at 0 for each matrix;
/// delta_min_current is the doubling base and persists across a sequence,
/// so a matrix that fails at delta1 = 0 jumps straight back to the last
/// level instead of re-climbing.
struct RegularizationState {
  double delta1 = 0.0;
  double delta_min_current = 0.0;
  index_t attempts = 0;  // factorization attempts on the current matrix

  static RegularizationState initial(const SolverConfig& cfg) {
    return {0.0, cfg.delta_min, 0};
  }
};

/// H_gamma = H_tilde + gamma J^T J with r_hat_x = r_x + gamma J^T r_y.
/// The pattern is the union pattern with a full diagonal, independent of
/// gamma, so one symbolic factorization serves every gamma and delta.
struct HGammaSystem {
  CscMatrix h_gamma;  // lower triangle
  std::vector<double> r_hat_x;
  double gamma_used = 0.0;
};

HGammaSystem assemble_h_gamma(const Reduced2x2& red, double gamma);

/// Shifted copy H + shift*I; the input must carry its full diagonal.
CscMatrix add_diagonal_shift(const CscMatrix& lower, double shift);

struct LadderFailure {
  index_t attempts = 0;
  double last_delta1 = 0.0;
  index_t failed_column = -1;
};

using LadderResult = std::variant<NumericCholesky, LadderFailure>;

/// Factorization with minimal diagonal regularization: try delta1 = 0,
/// then delta_min_current doubling until success or delta1 exceeds
/// delta_max / 2. Updates state in place; on success state.delta1 is the
/// level used and delta_min_current carries to the next matrix.
LadderResult factorize_with_ladder(
    const HGammaSystem& hg, std::shared_ptr<const SymbolicFactor> symbolic,
    const SolverConfig& cfg, RegularizationState& state);

/// S = J H_delta^{-1} J^T + delta2 I applied through triangular solves.
struct SchurOperator {
  const NumericCholesky* factor = nullptr;
  const CscMatrix* j = nullptr;
  double delta2_active = 0.0;

  std::vector<double> apply(std::span<const double> v) const;
};

struct CgTrace {
  std::vector<std::vector<double>> iterates;  // x_0, x_1, ...
};

struct CgResult {
  std::vector<double> x;
  index_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool small_quadratic_detected = false;
};

/// Conjugate gradients on the Schur operator. Stops on the relative
/// residual, on the iteration cap, or on curvature collapse
/// (p^T S p <= threshold p^T p), which signals an inconsistent system on
/// a rank-deficient J.
CgResult cg_schur(const SchurOperator& op, std::span<const double> rhs,
                  const SolverConfig& cfg, CgTrace* trace = nullptr);

enum class SolveStatus {
  kSolved,
  kSolvedWithDelta2,
  kFailedDeltaMaxExceeded,
  kFailedCgNoConvergence,
};

const char* to_string(SolveStatus status);
bool is_success(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::kSolved;
  double delta1_final = 0.0;
  double delta2_used = 0.0;
  index_t cg_iterations = 0;
  index_t factorization_attempts = 0;
  double be_4x4 = 0.0;
  double rr_4x4 = 0.0;
  double be_2x2 = 0.0;
  double rr_2x2 = 0.0;
  double be_2x2_scaled = 0.0;  // as seen by the inner solver
  double rr_2x2_scaled = 0.0;
  bool symbolic_reused = false;
  DensityReport density;
  index_t ruiz_iterations = 0;
  std::string failure_detail;
};

struct ReducedSolveResult {
  std::vector<double> dx;
  std::vector<double> dy;
  SolveReport report;
  std::shared_ptr<const SymbolicFactor> symbolic;
  bool symbolic_created = false;

  bool ok() const { return is_success(report.status); }
};

/// Lines 14-19 of the ladder algorithm on one reduced system: assemble
/// H_gamma, factorize with the ladder, direct solve for w, CG on the
/// Schur complement (restarting once with delta2 when the quadratic form
/// collapses), and the final direct solve for dx. Pass a null symbolic to
/// have one created and returned for reuse.
ReducedSolveResult solve_reduced(const Reduced2x2& red,
                                 const SolverConfig& cfg,
                                 std::shared_ptr<const SymbolicFactor> symbolic,
                                 RegularizationState& state);

struct FullSolveResult {
  std::optional<FullSolution> solution;
  SolveReport report;
  std::shared_ptr<const SymbolicFactor> symbolic;
  bool symbolic_created = false;
};

/// End to end on one block-4x4 system: reduce, Ruiz-scale, solve the
/// reduced system, unscale, recover. Backward errors are reported on the
/// original 4x4 and 2x2 systems (and on the scaled 2x2 the solver saw).
FullSolveResult solve_full(const BlockKkt4x4& sys, const SolverConfig& cfg,
                           std::shared_ptr<const SymbolicFactor> shared,
                           RegularizationState& state);

struct SequenceStats {
  index_t symbolic_analyses = 0;
  index_t numeric_factorizations = 0;
  index_t factorization_attempts = 0;
};

struct SequenceResult {
  std::vector<SolveReport> reports;
  std::vector<std::optional<FullSolution>> solutions;
  SequenceStats stats;
  bool pattern_uniform = true;

  bool all_successful() const;
};

/// Solves a sequence, sharing one symbolic factorization when the block
/// patterns are uniform and threading the regularization state through.
/// Per-matrix failures are recorded and the sequence continues.
SequenceResult solve_sequence(std::span<const BlockKkt4x4> systems,
                              const SolverConfig& cfg);

}  // namespace hkkt

#endif  // HKKT_SOLVER_HPP_
