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

#ifndef HKKT_DRIVER_HPP_
#define HKKT_DRIVER_HPP_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hkkt/generator.hpp"
#include "hkkt/solver.hpp"

namespace hkkt {

// Exit-code contract shared by tool and tests: 0 all matrices solved,
// 1 solve failures present, 2 usage or input errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSolveFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kSolveCsvSchema = "# schema: hybrid-kkt-solve-v1";
inline constexpr const char* kSolveCsvHeader =
    "k,delta1,delta2,cg_iterations,be_4x4,rr_4x4,be_2x2,rr_2x2,nnz_fac,ratio,"
    "status";
inline constexpr const char* kSweepCsvSchema = "# schema: hybrid-kkt-sweep-v1";
inline constexpr const char* kSweepCsvHeader =
    "gamma,k,cg_iterations,be_4x4,rr_4x4,delta1";

/// One solve pass over a sequence: configuration, input/output paths, and
/// the per-matrix reports. Serializes to JSON and round-trips.
struct RunManifest {
  int version = 1;
  std::string kind;  // "solve" or "sweep"
  SolverConfig config;
  std::string input_manifest;
  std::string csv_path;
  struct Run {
    double gamma = 0.0;
    std::vector<SolveReport> reports;
    SequenceStats stats;
  };
  std::vector<Run> runs;

  std::string to_json_string() const;
  static RunManifest from_json_string(const std::string& text);
};

int cmd_gen(const GeneratorSpec& spec, const std::filesystem::path& out_dir,
            std::ostream& err);

int cmd_solve(const std::filesystem::path& manifest_path,
              const SolverConfig& cfg, const std::filesystem::path& out_dir,
              std::ostream& err);

int cmd_sweep_gamma(const std::filesystem::path& manifest_path,
                    std::span<const double> gammas, const SolverConfig& cfg,
                    const std::filesystem::path& out_dir, std::ostream& err);

int cmd_report(const std::filesystem::path& run_manifest_path,
               std::ostream& out, std::ostream& err);

}  // namespace hkkt

#endif  // HKKT_DRIVER_HPP_
