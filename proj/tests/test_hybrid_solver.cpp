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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hkkt/generator.hpp"
#include "hkkt/metrics.hpp"
#include "hkkt/ordering.hpp"
#include "hkkt/solver.hpp"
#include "test_support.hpp"

using namespace hkkt;
using namespace hkkt::testing;

namespace {

// Direct construction of an HGammaSystem around a diagonal matrix with one
// negative entry of magnitude eps: lambda_min is exactly -eps.
HGammaSystem diagonal_h_gamma(index_t n, double eps) {
  std::vector<Triplet> entries;
  for (index_t i = 0; i < n; ++i) {
    entries.push_back({i, i, i == n - 1 ? -eps : 1.0 + 0.1 * double(i)});
  }
  HGammaSystem hg;
  hg.h_gamma = CscMatrix::from_triplets(n, n, entries);
  hg.r_hat_x.assign(n, 1.0);
  hg.gamma_used = 0.0;
  return hg;
}

std::shared_ptr<const SymbolicFactor> analyze(const CscMatrix& a) {
  return std::make_shared<SymbolicFactor>(
      symbolic_cholesky(a, amd_order(a)));
}

double rel_diff(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

BlockKkt4x4 well_posed_system(index_t nx, index_t mc, index_t md,
                              std::uint64_t seed) {
  GeneratorSpec spec;
  spec.n_x = nx;
  spec.m_c = mc;
  spec.m_d = md;
  spec.sequence_length = 1;
  spec.seed = seed;
  return generate_systems(spec)[0];
}

}  // namespace

TEST_CASE("assemble_h_gamma with gamma = 0 reproduces H_tilde") {
  TestRng rng(1);
  Reduced2x2 red;
  red.h_tilde = random_spd_lower(10, 3, 0.5, rng);
  red.j = random_sparse(3, 10, 2, rng);
  red.r_x.assign(10, 0.0);
  red.r_y.assign(3, 0.0);
  for (auto& v : red.r_x) v = rng.uniform(-1.0, 1.0);
  for (auto& v : red.r_y) v = rng.uniform(-1.0, 1.0);

  const HGammaSystem hg = assemble_h_gamma(red, 0.0);
  CHECK(hg.r_hat_x == red.r_x);
  const DenseMatrix got = densify_symmetric(hg.h_gamma);
  const DenseMatrix want = densify_symmetric(red.h_tilde);
  for (index_t i = 0; i < 10; ++i) {
    for (index_t j = 0; j < 10; ++j) CHECK(got(i, j) == want(i, j));
  }
}

TEST_CASE("assemble_h_gamma hand example at gamma = 1e4") {
  Reduced2x2 red;
  red.h_tilde = CscMatrix(2, 2);  // zero
  red.j = CscMatrix::from_triplets(
      1, 2, std::vector<Triplet>{{0, 0, 1.0}, {0, 1, 1.0}});
  red.r_x = {0.5, -0.5};
  red.r_y = {2.0};
  const HGammaSystem hg = assemble_h_gamma(red, 1e4);
  const DenseMatrix h = densify_symmetric(hg.h_gamma);
  for (index_t i = 0; i < 2; ++i) {
    for (index_t j = 0; j < 2; ++j) CHECK(h(i, j) == 1e4);
  }
  CHECK(hg.r_hat_x[0] == 0.5 + 1e4 * 2.0);
  CHECK(hg.r_hat_x[1] == -0.5 + 1e4 * 2.0);
}

TEST_CASE("assemble_h_gamma satisfies the operator probe identity") {
  TestRng rng(7);
  Reduced2x2 red;
  red.h_tilde = random_spd_lower(25, 3, 0.5, rng);
  red.j = random_sparse(8, 25, 3, rng);
  red.r_x.assign(25, 0.0);
  red.r_y.assign(8, 0.0);
  const double gamma = 1e4;
  const HGammaSystem hg = assemble_h_gamma(red, gamma);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(25);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    const std::vector<double> got = symmetric_spmv(hg.h_gamma, v);
    std::vector<double> want = symmetric_spmv(red.h_tilde, v);
    const std::vector<double> jv = spmv(red.j, v);
    const std::vector<double> jtjv = spmv(red.j, jv, true);
    for (index_t i = 0; i < 25; ++i) want[i] += gamma * jtjv[i];
    CHECK(rel_diff(got, want) <= 1e-12);
  }
}

TEST_CASE("H_gamma pattern is independent of gamma") {
  TestRng rng(11);
  Reduced2x2 red;
  red.h_tilde = random_spd_lower(15, 2, 0.5, rng);
  red.j = random_sparse(5, 15, 3, rng);
  red.r_x.assign(15, 0.0);
  red.r_y.assign(5, 0.0);
  const HGammaSystem a = assemble_h_gamma(red, 0.0);
  const HGammaSystem b = assemble_h_gamma(red, 1e6);
  CHECK(a.h_gamma.same_pattern_as(b.h_gamma));
  CHECK(a.h_gamma.diag_entries() == 15);  // full diagonal for the shift
}

TEST_CASE("ladder: SPD succeeds immediately with delta1 = 0") {
  TestRng rng(3);
  Reduced2x2 red;
  red.h_tilde = random_spd_lower(20, 3, 0.5, rng);
  red.j = random_sparse(6, 20, 3, rng);
  red.r_x.assign(20, 0.0);
  red.r_y.assign(6, 0.0);
  const HGammaSystem hg = assemble_h_gamma(red, 1e4);
  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const LadderResult r =
      factorize_with_ladder(hg, analyze(hg.h_gamma), cfg, state);
  CHECK(std::holds_alternative<NumericCholesky>(r));
  CHECK(state.attempts == 1);
  CHECK(state.delta1 == 0.0);
}

TEST_CASE("ladder finds the minimal level within a factor of two") {
  SolverConfig cfg;  // delta_min = 1e-9, delta_max = 1e-6
  for (int j = 0; j <= 6; ++j) {
    const double eps = 1.5 * cfg.delta_min * std::pow(2.0, j);
    const HGammaSystem hg = diagonal_h_gamma(12, eps);
    auto sym = analyze(hg.h_gamma);
    RegularizationState state = RegularizationState::initial(cfg);
    const LadderResult r = factorize_with_ladder(hg, sym, cfg, state);
    REQUIRE(std::holds_alternative<NumericCholesky>(r));
    // success at the first power of two above eps
    const double expected = cfg.delta_min * std::pow(2.0, j + 1);
    CHECK(state.delta1 == doctest::Approx(expected));
    // attempts: delta1 = 0, then the doubling rungs
    CHECK(state.attempts == j + 3);

    // the factor-of-two minimality: delta1 / 2 still fails
    const CscMatrix h_half =
        add_diagonal_shift(hg.h_gamma, state.delta1 / 2.0);
    const FactorizeResult again = numeric_cholesky(
        h_half, sym, cfg.pivot_floor * 1.0 /*max diag is O(1)*/);
    CHECK(std::holds_alternative<NotSpdFailure>(again));
  }
}

TEST_CASE("ladder failure exhausts within the attempt bound") {
  SolverConfig cfg;
  const HGammaSystem hg = diagonal_h_gamma(10, 1.0);  // lambda_min = -1
  RegularizationState state = RegularizationState::initial(cfg);
  const LadderResult r =
      factorize_with_ladder(hg, analyze(hg.h_gamma), cfg, state);
  REQUIRE(std::holds_alternative<LadderFailure>(r));
  const index_t bound = static_cast<index_t>(
      std::ceil(std::log2(cfg.delta_max / cfg.delta_min))) + 1;
  CHECK(std::get<LadderFailure>(r).attempts <= bound);
  CHECK(std::get<LadderFailure>(r).attempts == bound);
}

TEST_CASE("delta_min_current carries across matrices") {
  SolverConfig cfg;
  const double eps = 1.5 * cfg.delta_min * 16.0;  // needs 32 * delta_min
  const HGammaSystem hg = diagonal_h_gamma(12, eps);
  auto sym = analyze(hg.h_gamma);
  RegularizationState state = RegularizationState::initial(cfg);

  const LadderResult first = factorize_with_ladder(hg, sym, cfg, state);
  REQUIRE(std::holds_alternative<NumericCholesky>(first));
  const double level = state.delta1;
  CHECK(level == doctest::Approx(32.0 * cfg.delta_min));

  // next matrix in the sequence: delta1 restarts at 0, then jumps straight
  // back to the carried level
  const LadderResult second = factorize_with_ladder(hg, sym, cfg, state);
  REQUIRE(std::holds_alternative<NumericCholesky>(second));
  CHECK(state.attempts == 2);
  CHECK(state.delta1 == doctest::Approx(level));
}

TEST_CASE("cg_schur on trivial right-hand sides") {
  TestRng rng(5);
  const CscMatrix h = random_spd_lower(10, 2, 0.5, rng);
  auto sym = analyze(h);
  const auto f = std::get<NumericCholesky>(numeric_cholesky(h, sym, 0.0));
  const CscMatrix j = random_sparse(4, 10, 3, rng);
  const SchurOperator op{&f, &j, 0.0};
  SolverConfig cfg;
  const CgResult r = cg_schur(op, std::vector<double>(4, 0.0), cfg);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.x == std::vector<double>(4, 0.0));
}

TEST_CASE("cg_schur converges in one iteration when S is the identity") {
  // J with orthonormal rows and H_delta = I: S = J J^T = I.
  const index_t nx = 6, mc = 3;
  std::vector<Triplet> eye;
  for (index_t i = 0; i < nx; ++i) eye.push_back({i, i, 1.0});
  const CscMatrix h = CscMatrix::from_triplets(nx, nx, eye);
  auto sym = analyze(h);
  const auto f = std::get<NumericCholesky>(numeric_cholesky(h, sym, 0.0));
  std::vector<Triplet> jrows;
  for (index_t r = 0; r < mc; ++r) jrows.push_back({r, 2 * r, 1.0});
  const CscMatrix j = CscMatrix::from_triplets(mc, nx, jrows);
  const SchurOperator op{&f, &j, 0.0};
  SolverConfig cfg;
  const CgResult r = cg_schur(op, std::vector<double>{1.0, -2.0, 0.5}, cfg);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
}

TEST_CASE("solve_reduced matches a dense block solve") {
  // J square and nonsingular, H_tilde SPD.
  TestRng rng(13);
  const index_t n = 14;
  Reduced2x2 red;
  red.h_tilde = random_spd_lower(n, 3, 0.5, rng);
  std::vector<Triplet> jt;
  for (index_t i = 0; i < n; ++i) jt.push_back({i, i, 1.0 + 0.1 * i});
  for (index_t i = 0; i + 1 < n; ++i) jt.push_back({i, i + 1, 0.3});
  red.j = CscMatrix::from_triplets(n, n, jt);
  red.r_x.resize(n);
  red.r_y.resize(n);
  for (auto& v : red.r_x) v = rng.uniform(-1.0, 1.0);
  for (auto& v : red.r_y) v = rng.uniform(-1.0, 1.0);

  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const ReducedSolveResult r = solve_reduced(red, cfg, nullptr, state);
  REQUIRE(r.ok());
  CHECK(r.report.status == SolveStatus::kSolved);
  CHECK(r.report.delta1_final == 0.0);

  const DenseMatrix k2 = assemble_kkt2x2_dense(red);
  std::vector<double> rhs(red.r_x);
  rhs.insert(rhs.end(), red.r_y.begin(), red.r_y.end());
  const std::vector<double> z = dense_solve(k2, rhs);
  std::vector<double> got(r.dx);
  got.insert(got.end(), r.dy.begin(), r.dy.end());
  CHECK(rel_diff(got, z) <= 1e-9);
}

TEST_CASE("rank-deficient J with consistent rhs solves without delta2") {
  GeneratorSpec spec;
  spec.n_x = 30;
  spec.m_c = 8;
  spec.m_d = 6;
  spec.indefiniteness = IndefinitenessClass::kRankDeficientJ;
  spec.sequence_length = 1;
  spec.seed = 7;
  const BlockKkt4x4 sys = generate_systems(spec)[0];
  const Reduced2x2 red = reduce(sys);

  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const ReducedSolveResult r = solve_reduced(red, cfg, nullptr, state);
  REQUIRE(r.ok());
  CHECK(r.report.status == SolveStatus::kSolved);
  CHECK(r.report.delta2_used == 0.0);
  CHECK(dense_rank(densify(red.j), 0.0) == red.m_c() - 1);
}

TEST_CASE("rank-deficient J with inconsistent rhs restarts with delta2") {
  GeneratorSpec spec;
  spec.n_x = 30;
  spec.m_c = 8;
  spec.m_d = 6;
  spec.indefiniteness = IndefinitenessClass::kInconsistentRankDeficient;
  spec.sequence_length = 1;
  spec.seed = 8;
  const BlockKkt4x4 sys = generate_systems(spec)[0];
  const Reduced2x2 red = reduce(sys);

  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const ReducedSolveResult r = solve_reduced(red, cfg, nullptr, state);
  REQUIRE(r.ok());
  CHECK(r.report.status == SolveStatus::kSolvedWithDelta2);
  CHECK(r.report.delta2_used == cfg.delta2);
  CHECK(dense_rank(densify(red.j), 0.0) == red.m_c() - 1);
}

TEST_CASE("solve_full degenerates to one SPD solve without constraints") {
  TestRng rng(17);
  BlockKkt4x4 sys;
  sys.h = random_spd_lower(18, 3, 0.5, rng);
  sys.j = CscMatrix(0, 18);
  sys.j_d = CscMatrix(0, 18);
  sys.d_x.assign(18, 0.3);
  sys.r_tilde_x.resize(18);
  for (auto& v : sys.r_tilde_x) v = rng.uniform(-1.0, 1.0);

  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult r = solve_full(sys, cfg, nullptr, state);
  REQUIRE(r.solution.has_value());
  CHECK(r.report.cg_iterations == 0);
  CHECK(r.report.be_4x4 <= 1e-12);
}

TEST_CASE("solve_full reaches reference accuracy on a synthetic system") {
  const BlockKkt4x4 sys = well_posed_system(240, 60, 50, 23);  // N = 400
  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult r = solve_full(sys, cfg, nullptr, state);
  REQUIRE(r.solution.has_value());
  CHECK(r.report.be_4x4 <= 1e-8);
}

TEST_CASE("gamma S eigenvalues sit near one at gamma 1e4") {
  const BlockKkt4x4 sys = well_posed_system(60, 15, 12, 61);
  const Reduced2x2 red = reduce(sys);
  const ScaledReduced scaled = ruiz_scale(red, 20, 0.01);
  SolverConfig cfg;
  const std::vector<double> eig = schur_spectrum(scaled.system, cfg.gamma);
  index_t inside = 0;
  for (double v : eig) {
    if (v >= 0.9 && v <= 1.1) ++inside;
  }
  // clustered around one, with at most a small tail outside [0.9, 1.1]
  CHECK(inside * 10 >= static_cast<index_t>(eig.size()) * 9);

  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult r = solve_full(sys, cfg, nullptr, state);
  REQUIRE(r.solution.has_value());
  CHECK(r.report.cg_iterations <= 50);
}

TEST_CASE("solve_full agrees with the dense oracle when deltas stay zero") {
  const BlockKkt4x4 sys = well_posed_system(60, 15, 12, 31);
  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult r = solve_full(sys, cfg, nullptr, state);
  REQUIRE(r.solution.has_value());
  CHECK(r.report.delta1_final == 0.0);
  CHECK(r.report.delta2_used == 0.0);

  const std::vector<double> oracle =
      dense_solve(assemble_kkt4x4_dense(sys), sys.stacked_rhs());
  std::vector<double> got(r.solution->dx);
  got.insert(got.end(), r.solution->ds.begin(), r.solution->ds.end());
  got.insert(got.end(), r.solution->dy.begin(), r.solution->dy.end());
  got.insert(got.end(), r.solution->dyd.begin(), r.solution->dyd.end());
  CHECK(rel_diff(got, oracle) <= 1e-6);
}

TEST_CASE("a sequence of one behaves like solve_full") {
  const BlockKkt4x4 sys = well_posed_system(40, 10, 8, 37);
  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult single = solve_full(sys, cfg, nullptr, state);

  const std::vector<BlockKkt4x4> seq{sys};
  const SequenceResult result = solve_sequence(seq, cfg);
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].status == single.report.status);
  CHECK(result.reports[0].be_4x4 == single.report.be_4x4);
  CHECK(result.reports[0].cg_iterations == single.report.cg_iterations);
  CHECK(result.stats.symbolic_analyses == 1);
}

TEST_CASE("pattern-uniform sequences run one symbolic analysis") {
  GeneratorSpec spec;
  spec.n_x = 50;
  spec.m_c = 12;
  spec.m_d = 10;
  spec.sequence_length = 10;
  spec.seed = 41;
  const std::vector<BlockKkt4x4> systems = generate_systems(spec);
  SolverConfig cfg;
  const SequenceResult result = solve_sequence(systems, cfg);
  CHECK(result.pattern_uniform);
  CHECK(result.stats.symbolic_analyses == 1);
  CHECK(result.stats.numeric_factorizations == 10);
  CHECK(result.all_successful());
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    CHECK(result.reports[k].symbolic_reused == (k > 0));
  }
}

TEST_CASE("a failing matrix does not stop the sequence") {
  GeneratorSpec spec;
  spec.n_x = 40;
  spec.m_c = 10;
  spec.m_d = 8;
  spec.sequence_length = 10;
  spec.seed = 43;
  std::vector<BlockKkt4x4> systems = generate_systems(spec);

  // replace matrix 5 by one that is indefinite beyond delta_max
  GeneratorSpec bad = spec;
  bad.indefiniteness = IndefinitenessClass::kIndefinite;
  bad.sequence_length = 1;
  bad.seed = 44;
  systems[5] = generate_systems(bad)[0];

  SolverConfig cfg;
  const SequenceResult result = solve_sequence(systems, cfg);
  CHECK_FALSE(result.pattern_uniform);  // matrix 5 differs structurally
  CHECK(result.reports[5].status == SolveStatus::kFailedDeltaMaxExceeded);
  CHECK_FALSE(result.solutions[5].has_value());
  for (std::size_t k = 6; k < 10; ++k) {
    CHECK(is_success(result.reports[k].status));
    CHECK(result.solutions[k].has_value());
  }
}

TEST_CASE("empty sequences are rejected") {
  SolverConfig cfg;
  CHECK_THROWS_AS(solve_sequence({}, cfg), InvalidMatrixError);
}

TEST_CASE("parallel mode produces per-matrix identical successful results") {
  GeneratorSpec spec;
  spec.n_x = 30;
  spec.m_c = 8;
  spec.m_d = 6;
  spec.sequence_length = 6;
  spec.seed = 47;
  const std::vector<BlockKkt4x4> systems = generate_systems(spec);
  SolverConfig seq_cfg;
  SolverConfig par_cfg;
  par_cfg.parallel_sequence = true;
  const SequenceResult a = solve_sequence(systems, seq_cfg);
  const SequenceResult b = solve_sequence(systems, par_cfg);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t k = 0; k < a.reports.size(); ++k) {
    CHECK(a.reports[k].status == b.reports[k].status);
    // all-SPD sequence: no delta threading in play, results identical
    CHECK(a.reports[k].be_4x4 == b.reports[k].be_4x4);
  }
}

TEST_CASE("the Schur operator is positive semidefinite on random probes") {
  TestRng rng(53);
  const CscMatrix h = random_spd_lower(25, 3, 0.5, rng);
  auto sym = analyze(h);
  const auto f = std::get<NumericCholesky>(numeric_cholesky(h, sym, 0.0));
  const CscMatrix j = random_sparse(9, 25, 3, rng);
  const SchurOperator op{&f, &j, 0.0};
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(9);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    const std::vector<double> sv = op.apply(v);
    double quad = 0.0;
    for (index_t i = 0; i < 9; ++i) quad += v[i] * sv[i];
    CHECK(quad >= 0.0);
  }
}

TEST_CASE("CG hitting the iteration cap is a reported failure") {
  const BlockKkt4x4 sys = well_posed_system(40, 10, 8, 59);
  SolverConfig cfg;
  cfg.cg_max_iter = 1;
  cfg.cg_tol = 1e-15;  // unreachable in one iteration here
  cfg.gamma = 1.0;     // spread the Schur spectrum
  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult r = solve_full(sys, cfg, nullptr, state);
  CHECK(r.report.status == SolveStatus::kFailedCgNoConvergence);
  CHECK_FALSE(r.solution.has_value());
  CHECK(r.report.failure_detail.find("CG stalled") != std::string::npos);
}

TEST_CASE("a pivot just below the floor is rescued at the first rung") {
  SolverConfig cfg;
  // diag(1.05, ..., -2e-13): the negative pivot sits just below the
  // relative floor, so delta1 = delta_min already clears it.
  const HGammaSystem hg = diagonal_h_gamma(8, 2e-13);
  RegularizationState state = RegularizationState::initial(cfg);
  const LadderResult r =
      factorize_with_ladder(hg, analyze(hg.h_gamma), cfg, state);
  REQUIRE(std::holds_alternative<NumericCholesky>(r));
  CHECK(state.delta1 == cfg.delta_min);  // smallest rung, j = 0
  CHECK(state.attempts == 2);
}

TEST_CASE("solve_full with inequality constraints only (m_c = 0)") {
  TestRng rng(67);
  BlockKkt4x4 sys;
  sys.h = random_spd_lower(20, 3, 0.5, rng);
  sys.j = CscMatrix(0, 20);
  sys.j_d = random_sparse(7, 20, 3, rng);
  sys.d_x.assign(20, 0.4);
  sys.d_s.assign(7, 0.6);
  sys.r_tilde_x.resize(20);
  sys.r_s.resize(7);
  sys.r_yd.resize(7);
  for (auto& v : sys.r_tilde_x) v = rng.uniform(-1.0, 1.0);
  for (auto& v : sys.r_s) v = rng.uniform(-1.0, 1.0);
  for (auto& v : sys.r_yd) v = rng.uniform(-1.0, 1.0);

  SolverConfig cfg;
  RegularizationState state = RegularizationState::initial(cfg);
  const FullSolveResult r = solve_full(sys, cfg, nullptr, state);
  REQUIRE(r.solution.has_value());
  CHECK(r.report.cg_iterations == 0);
  CHECK(r.solution->dy.empty());
  CHECK(r.solution->ds.size() == 7);
  CHECK(r.report.be_4x4 <= 1e-12);
}
