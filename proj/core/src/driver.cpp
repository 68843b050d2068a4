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
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "hkkt/driver.hpp"
#include "hkkt/log.hpp"
#include "hkkt/manifest.hpp"

namespace hkkt {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, buf + len);
}

json config_to_json(const SolverConfig& cfg) {
  json j;
  j["gamma"] = cfg.gamma;
  j["delta_min"] = cfg.delta_min;
  j["delta_max"] = cfg.delta_max;
  j["delta2"] = cfg.delta2;
  j["cg_tol"] = cfg.cg_tol;
  j["cg_max_iter"] = cfg.cg_max_iter;
  j["small_quadratic_threshold"] = cfg.small_quadratic_threshold;
  j["pivot_floor"] = cfg.pivot_floor;
  j["ruiz_tol"] = cfg.ruiz_tol;
  j["ruiz_max_iters"] = cfg.ruiz_max_iters;
  j["parallel_sequence"] = cfg.parallel_sequence;
  return j;
}

SolverConfig config_from_json(const json& j) {
  SolverConfig cfg;
  cfg.gamma = j.at("gamma").get<double>();
  cfg.delta_min = j.at("delta_min").get<double>();
  cfg.delta_max = j.at("delta_max").get<double>();
  cfg.delta2 = j.at("delta2").get<double>();
  cfg.cg_tol = j.at("cg_tol").get<double>();
  cfg.cg_max_iter = j.at("cg_max_iter").get<index_t>();
  cfg.small_quadratic_threshold =
      j.at("small_quadratic_threshold").get<double>();
  cfg.pivot_floor = j.at("pivot_floor").get<double>();
  cfg.ruiz_tol = j.at("ruiz_tol").get<double>();
  cfg.ruiz_max_iters = j.at("ruiz_max_iters").get<index_t>();
  cfg.parallel_sequence = j.at("parallel_sequence").get<bool>();
  return cfg;
}

json report_to_json(const SolveReport& r) {
  json j;
  j["status"] = to_string(r.status);
  j["delta1"] = r.delta1_final;
  j["delta2"] = r.delta2_used;
  j["cg_iterations"] = r.cg_iterations;
  j["factorization_attempts"] = r.factorization_attempts;
  j["be_4x4"] = r.be_4x4;
  j["rr_4x4"] = r.rr_4x4;
  j["be_2x2"] = r.be_2x2;
  j["rr_2x2"] = r.rr_2x2;
  j["be_2x2_scaled"] = r.be_2x2_scaled;
  j["rr_2x2_scaled"] = r.rr_2x2_scaled;
  j["symbolic_reused"] = r.symbolic_reused;
  j["ruiz_iterations"] = r.ruiz_iterations;
  j["density"] = {{"rho_c", r.density.rho_c},
                  {"nnz_op", r.density.nnz_op},
                  {"nnz_fac", r.density.nnz_fac},
                  {"ratio", r.density.ratio}};
  j["failure_detail"] = r.failure_detail;
  return j;
}

SolveStatus status_from_string(const std::string& s) {
  if (s == "solved") return SolveStatus::kSolved;
  if (s == "solved_delta2") return SolveStatus::kSolvedWithDelta2;
  if (s == "failed_delta_max") return SolveStatus::kFailedDeltaMaxExceeded;
  if (s == "failed_cg") return SolveStatus::kFailedCgNoConvergence;
  throw ManifestError("unknown status '" + s + "'");
}

SolveReport report_from_json(const json& j) {
  SolveReport r;
  r.status = status_from_string(j.at("status").get<std::string>());
  r.delta1_final = j.at("delta1").get<double>();
  r.delta2_used = j.at("delta2").get<double>();
  r.cg_iterations = j.at("cg_iterations").get<index_t>();
  r.factorization_attempts = j.at("factorization_attempts").get<index_t>();
  auto load = [&j](const char* key) {
    const json& v = j.at(key);
    return v.is_null() ? std::nan("") : v.get<double>();
  };
  r.be_4x4 = load("be_4x4");
  r.rr_4x4 = load("rr_4x4");
  r.be_2x2 = load("be_2x2");
  r.rr_2x2 = load("rr_2x2");
  r.be_2x2_scaled = load("be_2x2_scaled");
  r.rr_2x2_scaled = load("rr_2x2_scaled");
  r.symbolic_reused = j.at("symbolic_reused").get<bool>();
  r.ruiz_iterations = j.at("ruiz_iterations").get<index_t>();
  const json& d = j.at("density");
  r.density.rho_c = d.at("rho_c").get<double>();
  r.density.nnz_op = d.at("nnz_op").get<index_t>();
  r.density.nnz_fac = d.at("nnz_fac").get<index_t>();
  r.density.ratio = d.at("ratio").get<double>();
  r.failure_detail = j.at("failure_detail").get<std::string>();
  return r;
}

void write_solve_csv_row(std::ostream& out, index_t k, const SolveReport& r) {
  out << k << "," << fmt(r.delta1_final) << "," << fmt(r.delta2_used) << ","
      << r.cg_iterations << "," << fmt(r.be_4x4) << "," << fmt(r.rr_4x4)
      << "," << fmt(r.be_2x2) << "," << fmt(r.rr_2x2) << ","
      << r.density.nnz_fac << "," << fmt(r.density.ratio) << ","
      << to_string(r.status) << "\n";
}

}  // namespace

std::string RunManifest::to_json_string() const {
  json j;
  j["version"] = version;
  j["kind"] = kind;
  j["config"] = config_to_json(config);
  j["input_manifest"] = input_manifest;
  j["csv"] = csv_path;
  j["runs"] = json::array();
  for (const Run& run : runs) {
    json r;
    r["gamma"] = run.gamma;
    r["reports"] = json::array();
    for (const SolveReport& rep : run.reports) {
      r["reports"].push_back(report_to_json(rep));
    }
    r["stats"] = {
        {"symbolic_analyses", run.stats.symbolic_analyses},
        {"numeric_factorizations", run.stats.numeric_factorizations},
        {"factorization_attempts", run.stats.factorization_attempts}};
    j["runs"].push_back(std::move(r));
  }
  return j.dump(1);
}

RunManifest RunManifest::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("run manifest: ") + e.what());
  }
  RunManifest m;
  m.version = j.at("version").get<int>();
  m.kind = j.at("kind").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.input_manifest = j.at("input_manifest").get<std::string>();
  m.csv_path = j.at("csv").get<std::string>();
  for (const json& r : j.at("runs")) {
    RunManifest::Run run;
    run.gamma = r.at("gamma").get<double>();
    for (const json& rep : r.at("reports")) {
      run.reports.push_back(report_from_json(rep));
    }
    const json& s = r.at("stats");
    run.stats.symbolic_analyses = s.at("symbolic_analyses").get<index_t>();
    run.stats.numeric_factorizations =
        s.at("numeric_factorizations").get<index_t>();
    run.stats.factorization_attempts =
        s.at("factorization_attempts").get<index_t>();
    m.runs.push_back(std::move(run));
  }
  return m;
}

int cmd_gen(const GeneratorSpec& spec, const std::filesystem::path& out_dir,
            std::ostream& err) {
  try {
    const std::vector<BlockKkt4x4> systems = generate_systems(spec);
    const std::filesystem::path manifest = save_sequence(out_dir, systems);
    HKKT_LOG_INFO("wrote " + manifest.string());
    return kExitOk;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return kExitUsage;
  }
}

namespace {

int run_over_sequence(const std::filesystem::path& manifest_path,
                      const SolverConfig& cfg,
                      const std::filesystem::path& out_dir,
                      std::span<const double> gammas, bool sweep,
                      std::ostream& err) {
  KktSequence seq;
  try {
    cfg.validate();
    seq = load_sequence(manifest_path);
  } catch (const std::exception& e) {
    err << (sweep ? "sweep-gamma: " : "solve: ") << e.what() << "\n";
    return kExitUsage;
  }
  if (seq.systems.empty()) {
    err << (sweep ? "sweep-gamma" : "solve")
        << ": manifest lists no systems: " << manifest_path.string() << "\n";
    return kExitUsage;
  }

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path csv_path =
      out_dir / (sweep ? "sweep.csv" : "solve.csv");
  std::ofstream csv(csv_path);
  if (!csv) {
    err << "cannot write " << csv_path.string() << "\n";
    return kExitUsage;
  }

  RunManifest manifest;
  manifest.kind = sweep ? "sweep" : "solve";
  manifest.config = cfg;
  manifest.input_manifest = manifest_path.string();
  manifest.csv_path = csv_path.string();

  bool any_failure = false;
  if (!sweep) {
    csv << kSolveCsvSchema << "\n" << kSolveCsvHeader << "\n";
    const SequenceResult result = solve_sequence(seq.systems, cfg);
    for (std::size_t k = 0; k < result.reports.size(); ++k) {
      write_solve_csv_row(csv, static_cast<index_t>(k), result.reports[k]);
    }
    any_failure = !result.all_successful();
    manifest.runs.push_back({cfg.gamma, result.reports, result.stats});
  } else {
    csv << kSweepCsvSchema << "\n" << kSweepCsvHeader << "\n";
    for (double gamma : gammas) {
      SolverConfig run_cfg = cfg;
      run_cfg.gamma = gamma;
      const SequenceResult result = solve_sequence(seq.systems, run_cfg);
      for (std::size_t k = 0; k < result.reports.size(); ++k) {
        const SolveReport& r = result.reports[k];
        csv << fmt(gamma) << "," << k << "," << r.cg_iterations << ","
            << fmt(r.be_4x4) << "," << fmt(r.rr_4x4) << ","
            << fmt(r.delta1_final) << "\n";
      }
      any_failure = any_failure || !result.all_successful();
      manifest.runs.push_back({gamma, result.reports, result.stats});
    }
  }
  csv.close();

  const std::filesystem::path run_path = out_dir / "run_manifest.json";
  std::ofstream run_out(run_path);
  if (!run_out) {
    err << "cannot write " << run_path.string() << "\n";
    return kExitUsage;
  }
  run_out << manifest.to_json_string() << "\n";
  return any_failure ? kExitSolveFailure : kExitOk;
}

}  // namespace

int cmd_solve(const std::filesystem::path& manifest_path,
              const SolverConfig& cfg, const std::filesystem::path& out_dir,
              std::ostream& err) {
  return run_over_sequence(manifest_path, cfg, out_dir, {}, false, err);
}

int cmd_sweep_gamma(const std::filesystem::path& manifest_path,
                    std::span<const double> gammas, const SolverConfig& cfg,
                    const std::filesystem::path& out_dir, std::ostream& err) {
  if (gammas.empty()) {
    err << "sweep-gamma: empty gamma list\n";
    return kExitUsage;
  }
  return run_over_sequence(manifest_path, cfg, out_dir, gammas, true, err);
}

int cmd_report(const std::filesystem::path& run_manifest_path,
               std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  try {
    std::ifstream in(run_manifest_path);
    if (!in) throw ManifestError("cannot open " + run_manifest_path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    manifest = RunManifest::from_json_string(text);
  } catch (const std::exception& e) {
    err << "report: " << e.what() << "\n";
    return kExitUsage;
  }

  out << "hybrid-kkt run report (" << manifest.kind << ")\n";
  out << "input: " << manifest.input_manifest << "\n";
  for (std::size_t i = 0; i < manifest.runs.size(); ++i) {
    const RunManifest::Run& run = manifest.runs[i];
    index_t failures = 0;
    double iter_sum = 0.0;
    index_t iter_max = 0;
    double worst_be = 0.0, worst_rr = 0.0;
    double ratio_sum = 0.0, rho_max = 0.0;
    index_t delta2_count = 0;
    std::map<double, index_t> delta1_hist;
    for (const SolveReport& r : run.reports) {
      if (!is_success(r.status)) {
        ++failures;
        continue;
      }
      iter_sum += static_cast<double>(r.cg_iterations);
      iter_max = std::max(iter_max, r.cg_iterations);
      worst_be = std::max(worst_be, r.be_4x4);
      worst_rr = std::max(worst_rr, r.rr_4x4);
      ratio_sum += r.density.ratio;
      rho_max = std::max(rho_max, r.density.rho_c);
      if (r.delta2_used > 0.0) ++delta2_count;
      delta1_hist[r.delta1_final]++;
    }
    const index_t solved =
        static_cast<index_t>(run.reports.size()) - failures;
    out << "\nrun " << (i + 1) << "/" << manifest.runs.size()
        << ": gamma = " << fmt(run.gamma) << "\n";
    out << "  matrices: " << run.reports.size() << "\n";
    out << "  failures: " << failures << "\n";
    if (solved > 0) {
      out << "  cg iterations: mean " << fmt(iter_sum / solved) << ", max "
          << iter_max << "\n";
      out << "  worst be_4x4: " << fmt(worst_be) << "\n";
      out << "  worst rr_4x4: " << fmt(worst_rr) << "\n";
      out << "  delta1 usage:";
      for (const auto& [value, count] : delta1_hist) {
        out << " " << count << "x " << fmt(value);
      }
      out << "\n";
      out << "  delta2 restarts: " << delta2_count << "\n";
      out << "  density: mean ratio " << fmt(ratio_sum / solved)
          << ", max rho_c " << fmt(rho_max) << "\n";
    }
    out << "  symbolic analyses: " << run.stats.symbolic_analyses
        << ", numeric factorizations: " << run.stats.numeric_factorizations
        << ", attempts: " << run.stats.factorization_attempts << "\n";
  }
  return kExitOk;
}

}  // namespace hkkt
