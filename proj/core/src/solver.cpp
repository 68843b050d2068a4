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
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hkkt/log.hpp"
#include "hkkt/ordering.hpp"
#include "hkkt/solver.hpp"

namespace hkkt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double max_abs_diagonal(const CscMatrix& lower) {
  double m = 0.0;
  for (index_t j = 0; j < lower.cols(); ++j) {
    for (index_t p = lower.col_ptr()[j]; p < lower.col_ptr()[j + 1]; ++p) {
      if (lower.row_idx()[p] == j) {
        m = std::max(m, std::fabs(lower.values()[p]));
        break;
      }
      if (lower.row_idx()[p] > j) break;
    }
  }
  return m;
}

}  // namespace

void SolverConfig::validate() const {
  if (gamma < 0.0) throw InvalidMatrixError("gamma must be >= 0");
  if (!(delta_min > 0.0) || !(delta_max > 0.0) || delta_min > delta_max) {
    throw InvalidMatrixError("need 0 < delta_min <= delta_max");
  }
  if (delta2 < 0.0) throw InvalidMatrixError("delta2 must be >= 0");
  if (!(cg_tol > 0.0)) throw InvalidMatrixError("cg_tol must be positive");
  if (cg_max_iter <= 0) throw InvalidMatrixError("cg_max_iter must be > 0");
  if (!(small_quadratic_threshold > 0.0)) {
    throw InvalidMatrixError("small_quadratic_threshold must be positive");
  }
  if (!(pivot_floor > 0.0)) {
    throw InvalidMatrixError("pivot_floor must be positive");
  }
  if (!(ruiz_tol > 0.0)) throw InvalidMatrixError("ruiz_tol must be positive");
  if (ruiz_max_iters <= 0) {
    throw InvalidMatrixError("ruiz_max_iters must be > 0");
  }
}

HGammaSystem assemble_h_gamma(const Reduced2x2& red, double gamma) {
  if (gamma < 0.0) throw InvalidMatrixError("gamma must be >= 0");
  HGammaSystem hg;
  hg.gamma_used = gamma;

  // Union pattern even where a coefficient is zero, so the symbolic
  // factorization is reusable across gamma and delta.
  const CscMatrix jtj = ata_lower(red.j, {});
  const CscMatrix* terms[] = {&red.h_tilde, &jtj};
  const double coeffs[] = {1.0, gamma};
  const std::vector<double> zero_diag(red.n_x(), 0.0);
  hg.h_gamma = add_symmetric_lower(terms, coeffs, zero_diag);

  hg.r_hat_x = spmv(red.j, red.r_y, /*transpose=*/true);
  for (index_t i = 0; i < red.n_x(); ++i) {
    hg.r_hat_x[i] = red.r_x[i] + gamma * hg.r_hat_x[i];
  }
  return hg;
}

CscMatrix add_diagonal_shift(const CscMatrix& lower, double shift) {
  std::vector<double> values(lower.values());
  for (index_t j = 0; j < lower.cols(); ++j) {
    bool found = false;
    for (index_t p = lower.col_ptr()[j]; p < lower.col_ptr()[j + 1]; ++p) {
      if (lower.row_idx()[p] == j) {
        values[p] += shift;
        found = true;
        break;
      }
      if (lower.row_idx()[p] > j) break;
    }
    if (!found) {
      throw InvalidMatrixError(
          "add_diagonal_shift: missing diagonal entry at column " +
          std::to_string(j));
    }
  }
  return CscMatrix(lower.rows(), lower.cols(), lower.col_ptr(),
                   lower.row_idx(), std::move(values));
}

LadderResult factorize_with_ladder(
    const HGammaSystem& hg, std::shared_ptr<const SymbolicFactor> symbolic,
    const SolverConfig& cfg, RegularizationState& state) {
  const double floor = cfg.pivot_floor * max_abs_diagonal(hg.h_gamma);
  state.delta1 = 0.0;
  state.attempts = 0;

  auto attempt = [&](double delta1) -> FactorizeResult {
    ++state.attempts;
    const CscMatrix h_delta = (delta1 == 0.0)
                                  ? hg.h_gamma
                                  : add_diagonal_shift(hg.h_gamma, delta1);
    return numeric_cholesky(h_delta, symbolic, floor);
  };

  FactorizeResult result = attempt(0.0);
  while (std::holds_alternative<NotSpdFailure>(result) &&
         state.delta1 <= cfg.delta_max / 2.0) {
    if (state.delta1 == 0.0) {
      state.delta1 = state.delta_min_current;
    } else {
      state.delta_min_current *= 2.0;
      state.delta1 = state.delta_min_current;
    }
    HKKT_LOG_DEBUG("ladder: retry with delta1 = " +
                   std::to_string(state.delta1));
    result = attempt(state.delta1);
  }

  if (std::holds_alternative<NotSpdFailure>(result)) {
    const auto& f = std::get<NotSpdFailure>(result);
    return LadderFailure{state.attempts, state.delta1, f.column};
  }
  return std::get<NumericCholesky>(std::move(result));
}

std::vector<double> SchurOperator::apply(std::span<const double> v) const {
  std::vector<double> t = spmv(*j, v, /*transpose=*/true);
  t = factor_solve(*factor, t);
  std::vector<double> out = spmv(*j, t);
  if (delta2_active != 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += delta2_active * v[i];
  }
  return out;
}

CgResult cg_schur(const SchurOperator& op, std::span<const double> rhs,
                  const SolverConfig& cfg, CgTrace* trace) {
  const index_t m = static_cast<index_t>(rhs.size());
  CgResult res;
  res.x.assign(m, 0.0);
  const double rhs_norm = norm2(rhs);
  if (trace) trace->iterates.push_back(res.x);
  if (rhs_norm == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> p = r;
  double rho = rhs_norm * rhs_norm;

  for (index_t it = 1; it <= cfg.cg_max_iter; ++it) {
    const std::vector<double> q = op.apply(p);
    double curvature = 0.0, p_norm2 = 0.0;
    for (index_t i = 0; i < m; ++i) {
      curvature += p[i] * q[i];
      p_norm2 += p[i] * p[i];
    }
    if (curvature <= cfg.small_quadratic_threshold * p_norm2) {
      res.small_quadratic_detected = true;
      res.relative_residual = norm2(r) / rhs_norm;
      return res;
    }
    const double alpha = rho / curvature;
    for (index_t i = 0; i < m; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    res.iterations = it;
    if (trace) trace->iterates.push_back(res.x);
    const double r_norm = norm2(r);
    res.relative_residual = r_norm / rhs_norm;
    if (res.relative_residual <= cfg.cg_tol) {
      res.converged = true;
      return res;
    }
    const double rho_next = r_norm * r_norm;
    const double beta = rho_next / rho;
    rho = rho_next;
    for (index_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
  }
  return res;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved:
      return "solved";
    case SolveStatus::kSolvedWithDelta2:
      return "solved_delta2";
    case SolveStatus::kFailedDeltaMaxExceeded:
      return "failed_delta_max";
    case SolveStatus::kFailedCgNoConvergence:
      return "failed_cg";
  }
  return "unknown";
}

bool is_success(SolveStatus status) {
  return status == SolveStatus::kSolved ||
         status == SolveStatus::kSolvedWithDelta2;
}

ReducedSolveResult solve_reduced(const Reduced2x2& red,
                                 const SolverConfig& cfg,
                                 std::shared_ptr<const SymbolicFactor> symbolic,
                                 RegularizationState& state) {
  cfg.validate();
  ReducedSolveResult out;
  const HGammaSystem hg = assemble_h_gamma(red, cfg.gamma);

  if (!symbolic) {
    symbolic = std::make_shared<SymbolicFactor>(symbolic_cholesky(
        hg.h_gamma, amd_order(hg.h_gamma)));
    out.symbolic_created = true;
  }
  out.symbolic = symbolic;

  LadderResult ladder = factorize_with_ladder(hg, symbolic, cfg, state);
  out.report.factorization_attempts = state.attempts;
  out.report.delta1_final = state.delta1;
  if (std::holds_alternative<LadderFailure>(ladder)) {
    const auto& f = std::get<LadderFailure>(ladder);
    out.report.status = SolveStatus::kFailedDeltaMaxExceeded;
    out.report.failure_detail =
        "factorization failed up to delta1 = " + std::to_string(f.last_delta1) +
        " at column " + std::to_string(f.failed_column);
    out.report.be_2x2 = out.report.rr_2x2 = kNan;
    return out;
  }
  const NumericCholesky factor = std::get<NumericCholesky>(std::move(ladder));
  out.report.density = density_report(red, factor);

  // Direct solve H_delta w = r_hat_x, then CG on the Schur complement.
  const std::vector<double> w = factor_solve(factor, hg.r_hat_x);
  std::vector<double> schur_rhs = spmv(red.j, w);
  for (index_t k = 0; k < red.m_c(); ++k) schur_rhs[k] -= red.r_y[k];

  SchurOperator op{&factor, &red.j, 0.0};
  CgResult cg = cg_schur(op, schur_rhs, cfg);
  if (cg.small_quadratic_detected) {
    HKKT_LOG_INFO("small quadratic form detected; restarting CG with delta2");
    op.delta2_active = cfg.delta2;
    cg = cg_schur(op, schur_rhs, cfg);
    out.report.delta2_used = cfg.delta2;
  }
  out.report.cg_iterations = cg.iterations;
  if (!cg.converged) {
    out.report.status = SolveStatus::kFailedCgNoConvergence;
    out.report.failure_detail =
        "CG stalled at relative residual " +
        std::to_string(cg.relative_residual) +
        (cg.small_quadratic_detected ? " (small quadratic after restart)"
                                     : "");
    out.dy = std::move(cg.x);  // best iterate, for diagnostics
    out.report.be_2x2 = out.report.rr_2x2 = kNan;
    return out;
  }
  out.report.status = out.report.delta2_used > 0.0
                          ? SolveStatus::kSolvedWithDelta2
                          : SolveStatus::kSolved;

  // dx = H_delta^{-1} (r_hat_x - J^T dy)
  std::vector<double> rhs_x = spmv(red.j, cg.x, /*transpose=*/true);
  for (index_t i = 0; i < red.n_x(); ++i) {
    rhs_x[i] = hg.r_hat_x[i] - rhs_x[i];
  }
  out.dx = factor_solve(factor, rhs_x);
  out.dy = std::move(cg.x);

  const ErrorReport err = error_report_kkt2x2(red, out.dx, out.dy);
  out.report.be_2x2 = err.be;
  out.report.rr_2x2 = err.rr;
  return out;
}

FullSolveResult solve_full(const BlockKkt4x4& sys, const SolverConfig& cfg,
                           std::shared_ptr<const SymbolicFactor> shared,
                           RegularizationState& state) {
  FullSolveResult out;
  const Reduced2x2 red = reduce(sys);
  ScaledReduced scaled = ruiz_scale(red, cfg.ruiz_max_iters, cfg.ruiz_tol);

  ReducedSolveResult inner =
      solve_reduced(scaled.system, cfg, std::move(shared), state);
  out.report = inner.report;
  out.report.ruiz_iterations = scaled.scaling.iterations_used;
  out.report.be_2x2_scaled = inner.report.be_2x2;
  out.report.rr_2x2_scaled = inner.report.rr_2x2;
  out.symbolic = inner.symbolic;
  out.symbolic_created = inner.symbolic_created;

  if (!inner.ok()) {
    out.report.be_4x4 = out.report.rr_4x4 = kNan;
    out.report.be_2x2 = out.report.rr_2x2 = kNan;
    return out;
  }

  auto [dx, dy] = unscale_solution(scaled.scaling, inner.dx, inner.dy);
  const ErrorReport err2 = error_report_kkt2x2(red, dx, dy);
  out.report.be_2x2 = err2.be;
  out.report.rr_2x2 = err2.rr;

  FullSolution full = recover(sys, std::move(dx), std::move(dy));
  const ErrorReport err4 = error_report_kkt4x4(sys, full);
  out.report.be_4x4 = err4.be;
  out.report.rr_4x4 = err4.rr;
  out.solution = std::move(full);
  return out;
}

bool SequenceResult::all_successful() const {
  for (const SolveReport& r : reports) {
    if (!is_success(r.status)) return false;
  }
  return true;
}

namespace {

bool uniform_patterns(std::span<const BlockKkt4x4> systems) {
  for (std::size_t k = 1; k < systems.size(); ++k) {
    if (!systems[k].h.same_pattern_as(systems[0].h) ||
        !systems[k].j.same_pattern_as(systems[0].j) ||
        !systems[k].j_d.same_pattern_as(systems[0].j_d)) {
      return false;
    }
  }
  return true;
}

}  // namespace

SequenceResult solve_sequence(std::span<const BlockKkt4x4> systems,
                              const SolverConfig& cfg) {
  if (systems.empty()) {
    throw InvalidMatrixError("solve_sequence: empty sequence");
  }
  cfg.validate();

  SequenceResult result;
  result.pattern_uniform = uniform_patterns(systems);
  result.reports.resize(systems.size());
  result.solutions.resize(systems.size());

  auto account = [&result](const FullSolveResult& r) {
    if (r.symbolic_created) result.stats.symbolic_analyses++;
    result.stats.factorization_attempts += r.report.factorization_attempts;
    // A CG failure still means the factorization itself succeeded; only a
    // ladder failure leaves no completed numeric factorization behind.
    if (r.report.status != SolveStatus::kFailedDeltaMaxExceeded) {
      result.stats.numeric_factorizations++;
    }
  };

  if (cfg.parallel_sequence) {
    // Independent per-matrix solves: fresh state, no delta_min threading.
    const std::size_t num_workers =
        std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::vector<FullSolveResult> results(systems.size());
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (std::size_t t = 0; t < std::min(num_workers, systems.size()); ++t) {
      workers.emplace_back([&]() {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= systems.size()) break;
          RegularizationState local = RegularizationState::initial(cfg);
          results[k] = solve_full(systems[k], cfg, nullptr, local);
        }
      });
    }
    for (auto& th : workers) th.join();
    for (std::size_t k = 0; k < systems.size(); ++k) {
      account(results[k]);
      result.reports[k] = std::move(results[k].report);
      result.solutions[k] = std::move(results[k].solution);
    }
    return result;
  }

  RegularizationState state = RegularizationState::initial(cfg);
  std::shared_ptr<const SymbolicFactor> shared;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    FullSolveResult r = solve_full(
        systems[k], cfg, result.pattern_uniform ? shared : nullptr, state);
    if (result.pattern_uniform && !shared) shared = r.symbolic;
    r.report.symbolic_reused = result.pattern_uniform && k > 0;
    account(r);
    result.reports[k] = std::move(r.report);
    result.solutions[k] = std::move(r.solution);
  }
  return result;
}

}  // namespace hkkt
