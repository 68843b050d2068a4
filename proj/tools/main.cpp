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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hkkt/driver.hpp"

namespace {

void add_config_flags(CLI::App* app, hkkt::SolverConfig* cfg) {
  app->add_option("--gamma", cfg->gamma, "gamma shift in H_gamma");
  app->add_option("--delta-min", cfg->delta_min,
                  "initial delta1 regularization level");
  app->add_option("--delta-max", cfg->delta_max,
                  "give up once delta1 would exceed this");
  app->add_option("--delta2", cfg->delta2,
                  "Schur shift used after a small-quadratic restart");
  app->add_option("--cg-tol", cfg->cg_tol, "CG relative residual tolerance");
  app->add_option("--cg-max-iter", cfg->cg_max_iter, "CG iteration cap");
  app->add_option("--pivot-floor", cfg->pivot_floor,
                  "Cholesky pivot floor, relative to the max diagonal");
  app->add_option("--ruiz-tol", cfg->ruiz_tol, "Ruiz convergence tolerance");
  app->add_option("--ruiz-max-iters", cfg->ruiz_max_iters,
                  "Ruiz sweep limit");
  app->add_flag("--parallel", cfg->parallel_sequence,
                "solve the matrices of a sequence concurrently (drops the "
                "delta_min carry-over)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid direct-iterative solver for block KKT sequences"};
  app.require_subcommand(1);

  // gen
  hkkt::GeneratorSpec gen_spec;
  std::string gen_class = "spd_on_nullspace";
  std::string gen_out = "generated";
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic sequence");
  gen->add_option("--nx", gen_spec.n_x, "primal dimension n_x");
  gen->add_option("--mc", gen_spec.m_c, "equality constraints m_c");
  gen->add_option("--md", gen_spec.m_d, "inequality constraints m_d");
  gen->add_option("--degree", gen_spec.graph_degree,
                  "average sparsity degree of the random graph");
  gen->add_option("--class", gen_class,
                  "spd_on_nullspace|indefinite|rank_deficient_j|"
                  "inconsistent_rank_deficient");
  gen->add_option("--length", gen_spec.sequence_length, "sequence length");
  gen->add_option("--drift", gen_spec.drift,
                  "relative value drift between consecutive matrices");
  gen->add_option("--seed", gen_spec.seed, "random seed");
  gen->add_option("--out", gen_out, "output directory");

  // solve
  hkkt::SolverConfig solve_cfg;
  std::string solve_manifest;
  std::string solve_out = "runs/solve";
  CLI::App* solve = app.add_subcommand("solve", "solve a sequence manifest");
  solve->add_option("manifest", solve_manifest, "sequence manifest JSON")
      ->required();
  solve->add_option("--out", solve_out, "output directory");
  add_config_flags(solve, &solve_cfg);

  // sweep-gamma
  hkkt::SolverConfig sweep_cfg;
  std::string sweep_manifest;
  std::string sweep_out = "runs/sweep";
  std::vector<double> gammas;
  CLI::App* sweep = app.add_subcommand(
      "sweep-gamma", "solve a sequence once per gamma value");
  sweep->add_option("manifest", sweep_manifest, "sequence manifest JSON")
      ->required();
  sweep->add_option("--gammas", gammas, "gamma values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "output directory");
  add_config_flags(sweep, &sweep_cfg);

  // report
  std::string report_manifest;
  CLI::App* report =
      app.add_subcommand("report", "summarize a run manifest as text");
  report->add_option("run_manifest", report_manifest,
                     "run_manifest.json from solve or sweep-gamma")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return hkkt::kExitUsage;
  }

  try {
    if (gen->parsed()) {
      gen_spec.indefiniteness = hkkt::indefiniteness_from_string(gen_class);
      return hkkt::cmd_gen(gen_spec, gen_out, std::cerr);
    }
    if (solve->parsed()) {
      return hkkt::cmd_solve(solve_manifest, solve_cfg, solve_out, std::cerr);
    }
    if (sweep->parsed()) {
      return hkkt::cmd_sweep_gamma(sweep_manifest, gammas, sweep_cfg,
                                   sweep_out, std::cerr);
    }
    if (report->parsed()) {
      return hkkt::cmd_report(report_manifest, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "hybrid-kkt: " << e.what() << "\n";
    return hkkt::kExitUsage;
  }
  return hkkt::kExitUsage;
}
