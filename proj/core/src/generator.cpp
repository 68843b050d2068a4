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
#include <limits>
#include <random>
#include <set>

#include "hkkt/dense.hpp"
#include "hkkt/generator.hpp"

namespace hkkt {

namespace {

// Deterministic uniform draws: the bit mapping is fixed here instead of
// relying on distribution internals, so fixed seeds reproduce bit-identical
// sequences everywhere.
struct RandomStream {
  std::mt19937_64 engine;

  explicit RandomStream(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) {
    const double u = (engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  index_t uniform_index(index_t n) {
    return static_cast<index_t>(engine() % static_cast<std::uint64_t>(n));
  }
};

// Random connected bounded-degree graph: a spanning tree plus extra edges
// until the average degree target is met.
std::set<std::pair<index_t, index_t>> random_graph_edges(index_t n,
                                                         index_t degree,
                                                         RandomStream& rng) {
  std::set<std::pair<index_t, index_t>> edges;
  for (index_t i = 1; i < n; ++i) {
    const index_t j = rng.uniform_index(i);
    edges.insert({std::max(i, j), std::min(i, j)});
  }
  const index_t target = n * degree / 2;
  index_t budget = 4 * target;  // cap attempts on tiny dense graphs
  while (static_cast<index_t>(edges.size()) < target && budget-- > 0) {
    const index_t i = rng.uniform_index(n);
    const index_t j = rng.uniform_index(n);
    if (i == j) continue;
    edges.insert({std::max(i, j), std::min(i, j)});
  }
  return edges;
}

// Sparse rectangular matrix with `per_row` entries per row, columns drawn
// from [0, n_cols) excluding `banned`.
CscMatrix random_rows(index_t n_rows, index_t n_cols, index_t per_row,
                      index_t banned, RandomStream& rng) {
  std::vector<Triplet> entries;
  entries.reserve(n_rows * per_row);
  for (index_t r = 0; r < n_rows; ++r) {
    std::set<index_t> cols;
    index_t budget = 50 * per_row;
    while (static_cast<index_t>(cols.size()) < per_row && budget-- > 0) {
      const index_t c = rng.uniform_index(n_cols);
      if (c == banned) continue;
      cols.insert(c);
    }
    for (index_t c : cols) entries.push_back({r, c, rng.uniform(-1.0, 1.0)});
  }
  return CscMatrix::from_triplets(n_rows, n_cols, entries);
}

std::vector<double> uniform_vector(index_t n, double lo, double hi,
                                   RandomStream& rng) {
  std::vector<double> v(n);
  for (index_t i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// H_tilde = H + diag(D_x) + J_d^T D_s J_d applied to v, from the sparse
// blocks (generation-time helper).
std::vector<double> h_tilde_apply(const BlockKkt4x4& sys,
                                  std::span<const double> v) {
  std::vector<double> out = symmetric_spmv(sys.h, v);
  for (index_t i = 0; i < sys.n_x(); ++i) out[i] += sys.d_x[i] * v[i];
  std::vector<double> t = spmv(sys.j_d, v);
  for (index_t k = 0; k < sys.m_d(); ++k) t[k] *= sys.d_s[k];
  const std::vector<double> jdt = spmv(sys.j_d, t, true);
  for (index_t i = 0; i < sys.n_x(); ++i) out[i] += jdt[i];
  return out;
}

DenseMatrix dense_h_tilde(const BlockKkt4x4& sys) {
  const index_t n = sys.n_x();
  DenseMatrix h = densify_symmetric(sys.h);
  for (index_t i = 0; i < n; ++i) h(i, i) += sys.d_x[i];
  const DenseMatrix jd = densify(sys.j_d);
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (index_t k = 0; k < sys.m_d(); ++k) {
        acc += jd(k, i) * sys.d_s[k] * jd(k, j);
      }
      h(i, j) += acc;
    }
  }
  return h;
}

// Orthonormal basis of null(J) from the eigenvectors of J^T J.
DenseMatrix nullspace_basis(const CscMatrix& j) {
  const index_t n = j.cols();
  const DenseMatrix jd = densify(j);
  DenseMatrix jtj(n, n);
  for (index_t a = 0; a < n; ++a) {
    for (index_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (index_t k = 0; k < j.rows(); ++k) acc += jd(k, a) * jd(k, b);
      jtj(a, b) = acc;
    }
  }
  const SymEig eig = dense_sym_eig_full(jtj);
  const double tol = 1e-10 * std::max(1.0, eig.values.back());
  index_t dim = 0;
  while (dim < n && eig.values[dim] <= tol) ++dim;
  DenseMatrix z(n, dim);
  for (index_t k = 0; k < dim; ++k) {
    for (index_t i = 0; i < n; ++i) z(i, k) = eig.vectors(i, k);
  }
  return z;
}

double min_eig_on_nullspace(const BlockKkt4x4& sys) {
  const DenseMatrix z = nullspace_basis(sys.j);
  if (z.cols() == 0) return std::numeric_limits<double>::infinity();
  const DenseMatrix h = dense_h_tilde(sys);
  const DenseMatrix hz = dense_multiply(h, z);
  const DenseMatrix zhz = dense_multiply(z.transposed(), hz);
  return dense_sym_eig(zhz).front();
}

void verify_class(const BlockKkt4x4& sys, const GeneratorSpec& spec,
                  index_t k) {
  if (spec.n_x > 500) return;  // oracle scale only
  const auto where = [&](const std::string& what) {
    return GeneratorError("generated system " + std::to_string(k) +
                          " violates class " +
                          to_string(spec.indefiniteness) + ": " + what);
  };
  const index_t rank = dense_rank(densify(sys.j), 0.0);
  const DenseMatrix h_tilde = dense_h_tilde(sys);
  switch (spec.indefiniteness) {
    case IndefinitenessClass::kSpdOnNullspace: {
      if (rank != sys.m_c()) throw where("J is not full row rank");
      if (min_eig_on_nullspace(sys) <= 0.0) {
        throw where("H_tilde is not PD on null(J)");
      }
      if (dense_sym_eig(h_tilde).front() >= 0.0) {
        throw where("H_tilde is not indefinite overall");
      }
      break;
    }
    case IndefinitenessClass::kIndefinite: {
      if (min_eig_on_nullspace(sys) >= 0.0) {
        throw where("no negative curvature on null(J)");
      }
      break;
    }
    case IndefinitenessClass::kRankDeficientJ:
    case IndefinitenessClass::kInconsistentRankDeficient: {
      if (rank != sys.m_c() - 1) throw where("rank(J) != m_c - 1");
      if (dense_sym_eig(h_tilde).front() <= 0.0) {
        throw where("H_tilde is not SPD");
      }
      const double gap =
          std::fabs(sys.r_y.back() - sys.r_y.front());
      const bool want_consistent =
          spec.indefiniteness == IndefinitenessClass::kRankDeficientJ;
      if (want_consistent && gap != 0.0) throw where("r_y not consistent");
      if (!want_consistent && gap == 0.0) throw where("r_y not inconsistent");
      break;
    }
  }
}

void drift_values(std::vector<double>& v, double drift, double lo_clamp,
                  RandomStream& rng) {
  for (double& x : v) {
    x *= 1.0 + drift * rng.uniform(-1.0, 1.0);
    if (lo_clamp > 0.0 && x < lo_clamp) x = lo_clamp;
  }
}

CscMatrix drift_matrix(const CscMatrix& a, double drift, RandomStream& rng) {
  std::vector<double> values(a.values());
  drift_values(values, drift, 0.0, rng);
  return CscMatrix(a.rows(), a.cols(), a.col_ptr(), a.row_idx(),
                   std::move(values));
}

// Appends a new last row that duplicates row 0, pattern and values.
CscMatrix append_duplicate_of_row0(const CscMatrix& j) {
  std::vector<Triplet> entries;
  entries.reserve(j.nnz() + j.nnz() / j.rows() + 1);
  const index_t last = j.rows();
  for (index_t col = 0; col < j.cols(); ++col) {
    for (index_t p = j.col_ptr()[col]; p < j.col_ptr()[col + 1]; ++p) {
      entries.push_back({j.row_idx()[p], col, j.values()[p]});
      if (j.row_idx()[p] == 0) entries.push_back({last, col, j.values()[p]});
    }
  }
  return CscMatrix::from_triplets(j.rows() + 1, j.cols(), entries);
}

// Re-copies row 0 values onto the last row; the patterns match by
// construction of append_duplicate_of_row0.
CscMatrix repair_duplicate_row(const CscMatrix& j) {
  std::vector<double> values(j.values());
  const index_t last = j.rows() - 1;
  for (index_t col = 0; col < j.cols(); ++col) {
    index_t p_first = -1;
    for (index_t p = j.col_ptr()[col]; p < j.col_ptr()[col + 1]; ++p) {
      if (j.row_idx()[p] == 0) p_first = p;
    }
    for (index_t p = j.col_ptr()[col]; p < j.col_ptr()[col + 1]; ++p) {
      if (j.row_idx()[p] == last && p_first >= 0) {
        values[p] = values[p_first];
      }
    }
  }
  return CscMatrix(j.rows(), j.cols(), j.col_ptr(), j.row_idx(),
                   std::move(values));
}

}  // namespace

const char* to_string(IndefinitenessClass c) {
  switch (c) {
    case IndefinitenessClass::kSpdOnNullspace:
      return "spd_on_nullspace";
    case IndefinitenessClass::kIndefinite:
      return "indefinite";
    case IndefinitenessClass::kRankDeficientJ:
      return "rank_deficient_j";
    case IndefinitenessClass::kInconsistentRankDeficient:
      return "inconsistent_rank_deficient";
  }
  return "unknown";
}

IndefinitenessClass indefiniteness_from_string(const std::string& name) {
  if (name == "spd_on_nullspace") return IndefinitenessClass::kSpdOnNullspace;
  if (name == "indefinite") return IndefinitenessClass::kIndefinite;
  if (name == "rank_deficient_j") return IndefinitenessClass::kRankDeficientJ;
  if (name == "inconsistent_rank_deficient") {
    return IndefinitenessClass::kInconsistentRankDeficient;
  }
  throw GeneratorError("unknown indefiniteness class '" + name + "'");
}

void GeneratorSpec::validate() const {
  if (n_x <= 0 || m_c <= 0 || m_d < 0 || sequence_length <= 0 ||
      graph_degree <= 0) {
    throw GeneratorError("all generator counts must be positive");
  }
  if (m_c >= n_x) {
    throw GeneratorError("need m_c < n_x (J must have more columns than "
                         "rows)");
  }
  if (graph_degree >= n_x) {
    throw GeneratorError("graph_degree must be below n_x");
  }
  if (drift < 0.0 || drift >= 0.5) {
    throw GeneratorError("drift must lie in [0, 0.5)");
  }
}

std::vector<BlockKkt4x4> generate_systems(const GeneratorSpec& spec) {
  spec.validate();
  RandomStream rng(spec.seed);

  const bool rank_deficient =
      spec.indefiniteness == IndefinitenessClass::kRankDeficientJ ||
      spec.indefiniteness == IndefinitenessClass::kInconsistentRankDeficient;
  const bool negative_null =
      spec.indefiniteness == IndefinitenessClass::kIndefinite;
  if (rank_deficient && spec.m_c < 2) {
    throw GeneratorError("rank-deficient classes need m_c >= 2");
  }
  // Column outside J's support gives a structural nullspace direction.
  const index_t banned_col = negative_null ? spec.n_x - 1 : -1;

  BlockKkt4x4 base;
  base.j = random_rows(rank_deficient ? spec.m_c - 1 : spec.m_c, spec.n_x,
                       spec.graph_degree, banned_col, rng);
  if (rank_deficient) base.j = append_duplicate_of_row0(base.j);
  base.j_d = random_rows(spec.m_d, spec.n_x, spec.graph_degree, -1, rng);
  base.d_x = uniform_vector(spec.n_x, 0.1, 1.1, rng);
  base.d_s = uniform_vector(spec.m_d, 0.1, 1.1, rng);
  base.r_tilde_x = uniform_vector(spec.n_x, -1.0, 1.0, rng);
  base.r_s = uniform_vector(spec.m_d, -1.0, 1.0, rng);
  base.r_y = uniform_vector(spec.m_c, -1.0, 1.0, rng);
  base.r_yd = uniform_vector(spec.m_d, -1.0, 1.0, rng);

  // Diagonally dominant symmetric base over a random connected graph.
  const auto edges = random_graph_edges(spec.n_x, spec.graph_degree, rng);
  std::vector<Triplet> h_entries;
  std::vector<double> row_abs(spec.n_x, 0.0);
  for (const auto& [i, j] : edges) {
    const double v = rng.uniform(-1.0, 1.0);
    h_entries.push_back({i, j, v});
    row_abs[i] += std::fabs(v);
    row_abs[j] += std::fabs(v);
  }
  for (index_t i = 0; i < spec.n_x; ++i) {
    h_entries.push_back({i, i, row_abs[i] + rng.uniform(0.5, 1.5)});
  }

  if (spec.indefiniteness == IndefinitenessClass::kSpdOnNullspace) {
    // Subtract alpha y y^T with y = first row of J: curvature on null(J)
    // is untouched (y^T v = 0 there) while the full space goes indefinite.
    std::vector<double> y(spec.n_x, 0.0);
    for (index_t col = 0; col < spec.n_x; ++col) {
      for (index_t p = base.j.col_ptr()[col]; p < base.j.col_ptr()[col + 1];
           ++p) {
        if (base.j.row_idx()[p] == 0) y[col] = base.j.values()[p];
      }
    }
    BlockKkt4x4 probe = base;
    probe.h = CscMatrix::from_triplets(spec.n_x, spec.n_x, h_entries);
    const std::vector<double> hy = h_tilde_apply(probe, y);
    double quad = 0.0, y_norm2 = 0.0;
    for (index_t i = 0; i < spec.n_x; ++i) {
      quad += y[i] * hy[i];
      y_norm2 += y[i] * y[i];
    }
    if (y_norm2 == 0.0) {
      throw GeneratorError("row 0 of J came out empty; raise graph_degree");
    }
    const double alpha = 1.5 * quad / (y_norm2 * y_norm2);
    for (index_t a = 0; a < spec.n_x; ++a) {
      if (y[a] == 0.0) continue;
      for (index_t b = 0; b <= a; ++b) {
        if (y[b] == 0.0) continue;
        h_entries.push_back({a, b, -alpha * y[a] * y[b]});
      }
    }
  } else if (negative_null) {
    // Make H_tilde's diagonal strictly negative on the banned column.
    BlockKkt4x4 probe = base;
    probe.h = CscMatrix::from_triplets(spec.n_x, spec.n_x, h_entries);
    std::vector<double> e(spec.n_x, 0.0);
    e[banned_col] = 1.0;
    const double current = h_tilde_apply(probe, e)[banned_col];
    h_entries.push_back({banned_col, banned_col, -current - 1.0});
  }
  base.h = CscMatrix::from_triplets(spec.n_x, spec.n_x, h_entries);

  if (rank_deficient) {
    base.r_y[spec.m_c - 1] =
        spec.indefiniteness == IndefinitenessClass::kRankDeficientJ
            ? base.r_y[0]
            : base.r_y[0] + 1.0 + std::fabs(base.r_y[0]);
  }

  std::vector<BlockKkt4x4> systems;
  systems.reserve(spec.sequence_length);
  base.validate();
  verify_class(base, spec, 0);
  systems.push_back(base);

  for (index_t k = 1; k < spec.sequence_length; ++k) {
    BlockKkt4x4 sys = systems.back();
    sys.h = drift_matrix(sys.h, spec.drift, rng);
    sys.j = drift_matrix(sys.j, spec.drift, rng);
    sys.j_d = drift_matrix(sys.j_d, spec.drift, rng);
    drift_values(sys.d_x, spec.drift, 1e-6, rng);
    drift_values(sys.d_s, spec.drift, 1e-6, rng);
    drift_values(sys.r_tilde_x, spec.drift, 0.0, rng);
    drift_values(sys.r_s, spec.drift, 0.0, rng);
    drift_values(sys.r_y, spec.drift, 0.0, rng);
    drift_values(sys.r_yd, spec.drift, 0.0, rng);
    if (rank_deficient) {
      sys.j = repair_duplicate_row(sys.j);
      sys.r_y[spec.m_c - 1] =
          spec.indefiniteness == IndefinitenessClass::kRankDeficientJ
              ? sys.r_y[0]
              : sys.r_y[0] + 1.0 + std::fabs(sys.r_y[0]);
    }
    sys.validate();
    verify_class(sys, spec, k);
    systems.push_back(std::move(sys));
  }
  return systems;
}

}  // namespace hkkt
