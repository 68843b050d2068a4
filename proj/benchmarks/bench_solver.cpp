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

#include <benchmark/benchmark.h>

#include "hkkt/generator.hpp"
#include "hkkt/ordering.hpp"
#include "hkkt/solver.hpp"

namespace {

using namespace hkkt;

BlockKkt4x4 instance(index_t n_x) {
  GeneratorSpec spec;
  spec.n_x = n_x;
  spec.m_c = n_x / 4;
  spec.m_d = n_x / 5;
  spec.sequence_length = 1;
  spec.seed = 7;
  return generate_systems(spec)[0];
}

void BM_spmv(benchmark::State& state) {
  const BlockKkt4x4 sys = instance(state.range(0));
  const Reduced2x2 red = reduce(sys);
  std::vector<double> x(red.n_x(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetric_spmv(red.h_tilde, x));
  }
}
BENCHMARK(BM_spmv)->Arg(200)->Arg(800);

void BM_amd_order(benchmark::State& state) {
  const BlockKkt4x4 sys = instance(state.range(0));
  const HGammaSystem hg = assemble_h_gamma(reduce(sys), 1e4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(amd_order(hg.h_gamma));
  }
}
BENCHMARK(BM_amd_order)->Arg(200)->Arg(800);

void BM_symbolic(benchmark::State& state) {
  const BlockKkt4x4 sys = instance(state.range(0));
  const HGammaSystem hg = assemble_h_gamma(reduce(sys), 1e4);
  const Permutation p = amd_order(hg.h_gamma);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symbolic_cholesky(hg.h_gamma, p));
  }
}
BENCHMARK(BM_symbolic)->Arg(200)->Arg(800);

void BM_numeric_cholesky(benchmark::State& state) {
  const BlockKkt4x4 sys = instance(state.range(0));
  const HGammaSystem hg = assemble_h_gamma(reduce(sys), 1e4);
  auto sym = std::make_shared<SymbolicFactor>(
      symbolic_cholesky(hg.h_gamma, amd_order(hg.h_gamma)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(numeric_cholesky(hg.h_gamma, sym, 1e-13));
  }
}
BENCHMARK(BM_numeric_cholesky)->Arg(200)->Arg(800);

void BM_factor_solve(benchmark::State& state) {
  const BlockKkt4x4 sys = instance(state.range(0));
  const HGammaSystem hg = assemble_h_gamma(reduce(sys), 1e4);
  auto sym = std::make_shared<SymbolicFactor>(
      symbolic_cholesky(hg.h_gamma, amd_order(hg.h_gamma)));
  const auto f = std::get<NumericCholesky>(
      numeric_cholesky(hg.h_gamma, sym, 1e-13));
  const std::vector<double> b(hg.h_gamma.cols(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(factor_solve(f, b));
  }
}
BENCHMARK(BM_factor_solve)->Arg(200)->Arg(800);

void BM_solve_full(benchmark::State& state) {
  const BlockKkt4x4 sys = instance(state.range(0));
  SolverConfig cfg;
  for (auto _ : state) {
    RegularizationState reg = RegularizationState::initial(cfg);
    benchmark::DoNotOptimize(solve_full(sys, cfg, nullptr, reg));
  }
}
BENCHMARK(BM_solve_full)->Arg(200)->Arg(500);

void BM_solve_sequence_reuse(benchmark::State& state) {
  GeneratorSpec spec;
  spec.n_x = state.range(0);
  spec.m_c = spec.n_x / 4;
  spec.m_d = spec.n_x / 5;
  spec.sequence_length = 8;
  spec.seed = 7;
  const std::vector<BlockKkt4x4> systems = generate_systems(spec);
  SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_sequence(systems, cfg));
  }
}
BENCHMARK(BM_solve_sequence_reuse)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
