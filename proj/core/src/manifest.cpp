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

#include <fstream>

#include <json.hpp>

#include "hkkt/manifest.hpp"
#include "hkkt/matrix_market.hpp"

namespace hkkt {

namespace {

using nlohmann::json;

std::vector<double> get_vector(const json& j, const std::string& key,
                               index_t expected,
                               const std::filesystem::path& file) {
  if (!j.contains(key)) {
    throw ManifestError(file.string() + ": missing vector '" + key + "'");
  }
  std::vector<double> v = j.at(key).get<std::vector<double>>();
  if (static_cast<index_t>(v.size()) != expected) {
    throw ManifestError(file.string() + ": vector '" + key + "' has length " +
                        std::to_string(v.size()) + ", expected " +
                        std::to_string(expected));
  }
  return v;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  return j;
}

CscMatrix load_matrix(const std::filesystem::path& path, bool expect_symmetric,
                      const char* name) {
  MatrixMarketData data = read_matrix_market(path);
  if (expect_symmetric != data.symmetric) {
    throw ManifestError(path.string() + ": " + name + " must be " +
                        (expect_symmetric ? "symmetric" : "general"));
  }
  return std::move(data.matrix);
}

}  // namespace

KktSequence load_sequence(const std::filesystem::path& manifest_path) {
  const json manifest = read_json_file(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();

  if (!manifest.contains("systems") || !manifest.at("systems").is_array()) {
    throw ManifestError(manifest_path.string() +
                        ": missing 'systems' array");
  }

  KktSequence seq;
  for (const json& entry : manifest.at("systems")) {
    const index_t nx = entry.at("n_x").get<index_t>();
    const index_t mc = entry.at("m_c").get<index_t>();
    const index_t md = entry.at("m_d").get<index_t>();

    BlockKkt4x4 sys;
    sys.h = load_matrix(base / entry.at("H").get<std::string>(), true, "H");
    sys.j = load_matrix(base / entry.at("J").get<std::string>(), false, "J");
    sys.j_d =
        load_matrix(base / entry.at("J_d").get<std::string>(), false, "J_d");

    const std::filesystem::path vec_path =
        base / entry.at("vectors").get<std::string>();
    const json vectors = read_json_file(vec_path);
    sys.d_x = get_vector(vectors, "D_x", nx, vec_path);
    sys.d_s = get_vector(vectors, "D_s", md, vec_path);
    sys.r_tilde_x = get_vector(vectors, "r_tilde_x", nx, vec_path);
    sys.r_s = get_vector(vectors, "r_s", md, vec_path);
    sys.r_y = get_vector(vectors, "r_y", mc, vec_path);
    sys.r_yd = get_vector(vectors, "r_yd", md, vec_path);

    if (sys.h.cols() != nx || sys.j.rows() != mc || sys.j.cols() != nx ||
        sys.j_d.rows() != md || sys.j_d.cols() != nx) {
      throw ManifestError(manifest_path.string() +
                          ": matrix dimensions disagree with declared "
                          "n_x/m_c/m_d for system " +
                          std::to_string(seq.systems.size()));
    }
    try {
      sys.validate();
    } catch (const InvalidMatrixError& e) {
      throw ManifestError(manifest_path.string() + ": system " +
                          std::to_string(seq.systems.size()) + ": " +
                          e.what());
    }
    seq.systems.push_back(std::move(sys));
  }

  seq.pattern_uniform = true;
  for (std::size_t k = 1; k < seq.systems.size(); ++k) {
    const BlockKkt4x4& first = seq.systems.front();
    const BlockKkt4x4& cur = seq.systems[k];
    if (!cur.h.same_pattern_as(first.h) || !cur.j.same_pattern_as(first.j) ||
        !cur.j_d.same_pattern_as(first.j_d)) {
      seq.pattern_uniform = false;
      break;
    }
  }
  return seq;
}

std::filesystem::path save_sequence(const std::filesystem::path& out_dir,
                                    std::span<const BlockKkt4x4> systems) {
  std::filesystem::create_directories(out_dir);
  json manifest;
  manifest["version"] = 1;
  manifest["systems"] = json::array();

  for (std::size_t k = 0; k < systems.size(); ++k) {
    const BlockKkt4x4& sys = systems[k];
    const std::string stem = "sys" + std::to_string(k);
    write_matrix_market(out_dir / (stem + "_H.mtx"), sys.h, true);
    write_matrix_market(out_dir / (stem + "_J.mtx"), sys.j, false);
    write_matrix_market(out_dir / (stem + "_Jd.mtx"), sys.j_d, false);

    json vectors;
    vectors["D_x"] = sys.d_x;
    vectors["D_s"] = sys.d_s;
    vectors["r_tilde_x"] = sys.r_tilde_x;
    vectors["r_s"] = sys.r_s;
    vectors["r_y"] = sys.r_y;
    vectors["r_yd"] = sys.r_yd;
    const std::filesystem::path vec_path = out_dir / (stem + "_vectors.json");
    std::ofstream vec_out(vec_path);
    if (!vec_out) {
      throw ManifestError("cannot write " + vec_path.string());
    }
    vec_out << vectors.dump(1) << "\n";

    json entry;
    entry["n_x"] = sys.n_x();
    entry["m_c"] = sys.m_c();
    entry["m_d"] = sys.m_d();
    entry["H"] = stem + "_H.mtx";
    entry["J"] = stem + "_J.mtx";
    entry["J_d"] = stem + "_Jd.mtx";
    entry["vectors"] = stem + "_vectors.json";
    manifest["systems"].push_back(entry);
  }

  std::filesystem::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw ManifestError("cannot write " + manifest_path.string());
  out << manifest.dump(1) << "\n";
  return manifest_path;
}

}  // namespace hkkt
