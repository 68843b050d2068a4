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

// Approximate minimum degree on a quotient graph, in the style of
// Amestoy, Davis & Duff (SIAM J. Matrix Anal. 1996): external-degree
// approximation, aggressive element absorption, mass elimination, and
// supervariable detection through hashing. Nodes 0..n-1 are variables
// that become elements when eliminated; node n collects dense rows.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hkkt/ordering.hpp"

namespace hkkt {

namespace {

inline index_t flip(index_t i) { return -i - 2; }

// Resets the mark array when the stamp is about to wrap or collide.
index_t clear_marks(index_t mark, index_t lemax, std::vector<index_t>& w,
                    index_t n) {
  if (mark < 2 || mark + lemax < 0) {
    for (index_t k = 0; k < n; ++k) {
      if (w[k] != 0) w[k] = 1;
    }
    mark = 2;
  }
  return mark;  // w[0..n-1] < mark from here on
}

// Depth-first postorder of the assembly tree rooted at j. head/next are
// child lists; consumes head. Returns the next free output slot.
index_t tree_postorder(index_t j, index_t k, std::vector<index_t>& head,
                       const std::vector<index_t>& next,
                       std::vector<index_t>& post,
                       std::vector<index_t>& stack) {
  index_t top = 0;
  stack[0] = j;
  while (top >= 0) {
    const index_t p = stack[top];
    const index_t child = head[p];
    if (child == -1) {
      --top;
      post[k++] = p;
    } else {
      head[p] = next[child];
      stack[++top] = child;
    }
  }
  return k;
}

}  // namespace

Permutation amd_order(const CscMatrix& pattern) {
  if (!pattern.is_square()) {
    throw InvalidMatrixError("amd_order requires a square pattern");
  }
  const index_t n = pattern.cols();
  if (n == 0) return Permutation::identity(0);

  // Working graph: A + A^T without the diagonal, with elbow room.
  const CscMatrix sym = pattern.symmetrized_pattern();
  std::vector<index_t> node_ptr(n + 1);
  std::vector<index_t> adj;
  adj.reserve(sym.nnz());
  for (index_t j = 0; j < n; ++j) {
    node_ptr[j] = static_cast<index_t>(adj.size());
    for (index_t p = sym.col_ptr()[j]; p < sym.col_ptr()[j + 1]; ++p) {
      const index_t i = sym.row_idx()[p];
      if (i != j) adj.push_back(i);
    }
  }
  node_ptr[n] = static_cast<index_t>(adj.size());
  index_t nz_used = node_ptr[n];
  const index_t capacity = nz_used + nz_used / 5 + 2 * n + 2;
  adj.resize(capacity);

  const index_t dense_threshold = std::min<index_t>(
      n - 2, std::max<index_t>(
                 16, static_cast<index_t>(10.0 * std::sqrt(double(n)))));

  std::vector<index_t> len(n + 1), super_size(n + 1, 1), elem_count(n + 1, 0),
      degree(n + 1), w(n + 1, 1), deg_head(n + 1, -1), deg_next(n + 1, -1),
      deg_prev(n + 1, -1), hash_head(n + 1, -1), cp(n + 1), stack(n + 1),
      post(n + 1);
  for (index_t i = 0; i < n; ++i) len[i] = node_ptr[i + 1] - node_ptr[i];
  len[n] = 0;
  cp = node_ptr;  // cp[i]: adjacency start, or flip(parent) once absorbed
  degree = len;

  index_t mark = clear_marks(0, 0, w, n);
  index_t nel = 0;  // eliminated supervariable mass
  index_t lemax = 0;
  index_t mindeg = 0;

  elem_count[n] = -2;  // node n is a placeholder element for dense rows
  cp[n] = -1;
  w[n] = 0;

  for (index_t i = 0; i < n; ++i) {
    const index_t d = degree[i];
    if (d == 0) {  // isolated: eliminate immediately
      elem_count[i] = -2;
      ++nel;
      cp[i] = -1;
      w[i] = 0;
    } else if (d > dense_threshold) {  // dense: absorb into node n
      super_size[i] = 0;
      elem_count[i] = -1;
      ++nel;
      cp[i] = flip(n);
      ++super_size[n];
    } else {
      if (deg_head[d] != -1) deg_prev[deg_head[d]] = i;
      deg_next[i] = deg_head[d];
      deg_head[d] = i;
    }
  }

  while (nel < n) {
    // Pivot: lowest index within the minimum nonempty degree list.
    while (mindeg < n && deg_head[mindeg] == -1) ++mindeg;
    index_t k = deg_head[mindeg];
    for (index_t i = deg_next[k]; i != -1; i = deg_next[i]) {
      if (i < k) k = i;
    }
    if (deg_prev[k] != -1) {
      deg_next[deg_prev[k]] = deg_next[k];
    } else {
      deg_head[mindeg] = deg_next[k];
    }
    if (deg_next[k] != -1) deg_prev[deg_next[k]] = deg_prev[k];

    const index_t elenk = elem_count[k];
    index_t nvk = super_size[k];
    nel += nvk;

    // Garbage-collect the adjacency pool when the new element may not fit.
    if (elenk > 0 && nz_used + mindeg >= capacity) {
      for (index_t j = 0; j < n; ++j) {
        const index_t p = cp[j];
        if (p >= 0) {  // j is live: stash first entry, tag the slot
          cp[j] = adj[p];
          adj[p] = flip(j);
        }
      }
      index_t q = 0;
      for (index_t p = 0; p < nz_used;) {
        const index_t j = flip(adj[p++]);
        if (j >= 0) {
          adj[q] = cp[j];
          cp[j] = q++;
          for (index_t k3 = 0; k3 < len[j] - 1; ++k3) adj[q++] = adj[p++];
        }
      }
      nz_used = q;
    }

    // Construct element Lk from k's variable list and its elements' lists.
    index_t dk = 0;
    super_size[k] = -nvk;  // flag: k is in Lk
    index_t p = cp[k];
    const index_t pk1 = (elenk == 0) ? p : nz_used;
    index_t pk2 = pk1;
    for (index_t k1 = 1; k1 <= elenk + 1; ++k1) {
      index_t e, pj, ln;
      if (k1 > elenk) {
        e = k;
        pj = p;
        ln = len[k] - elenk;
      } else {
        e = adj[p++];
        pj = cp[e];
        ln = len[e];
      }
      for (index_t k2 = 1; k2 <= ln; ++k2) {
        const index_t i = adj[pj++];
        const index_t nvi = super_size[i];
        if (nvi <= 0) continue;  // dead, or already placed in Lk
        dk += nvi;
        super_size[i] = -nvi;
        adj[pk2++] = i;
        if (deg_next[i] != -1) deg_prev[deg_next[i]] = deg_prev[i];
        if (deg_prev[i] != -1) {
          deg_next[deg_prev[i]] = deg_next[i];
        } else {
          deg_head[degree[i]] = deg_next[i];
        }
      }
      if (e != k) {
        cp[e] = flip(k);  // e is absorbed into k
        w[e] = 0;
      }
    }
    if (elenk != 0) nz_used = pk2;
    degree[k] = dk;
    cp[k] = pk1;
    len[k] = pk2 - pk1;
    elem_count[k] = -2;  // k is an element now

    // Scan 1: compute |Le \ Lk| for elements e adjacent to Lk members.
    mark = clear_marks(mark, lemax, w, n);
    for (index_t pk = pk1; pk < pk2; ++pk) {
      const index_t i = adj[pk];
      const index_t eln = elem_count[i];
      if (eln <= 0) continue;
      const index_t nvi = -super_size[i];
      const index_t wnvi = mark - nvi;
      for (index_t pe = cp[i]; pe <= cp[i] + eln - 1; ++pe) {
        const index_t e = adj[pe];
        if (w[e] >= mark) {
          w[e] -= nvi;
        } else if (w[e] != 0) {
          w[e] = degree[e] + wnvi;
        }
      }
    }

    // Scan 2: approximate external degrees; absorb and mass-eliminate.
    for (index_t pk = pk1; pk < pk2; ++pk) {
      const index_t i = adj[pk];
      const index_t p1 = cp[i];
      const index_t p2 = p1 + elem_count[i] - 1;
      index_t pn = p1;
      index_t hash = 0;
      index_t d = 0;
      for (index_t pe = p1; pe <= p2; ++pe) {  // element list of i
        const index_t e = adj[pe];
        if (w[e] == 0) continue;  // dead element
        const index_t dext = w[e] - mark;
        if (dext > 0) {
          d += dext;
          adj[pn++] = e;
          hash += e;
        } else {
          cp[e] = flip(k);  // aggressive absorption: Le is inside Lk
          w[e] = 0;
        }
      }
      elem_count[i] = pn - p1 + 1;  // element count plus one slot for k
      const index_t p3 = pn;
      const index_t p4 = p1 + len[i];
      for (index_t pv = p2 + 1; pv < p4; ++pv) {  // variable list of i
        const index_t j = adj[pv];
        const index_t nvj = super_size[j];
        if (nvj <= 0) continue;
        d += nvj;
        adj[pn++] = j;
        hash += j;
      }
      if (d == 0) {  // mass elimination: adjacency of i is contained in Lk
        cp[i] = flip(k);
        const index_t nvi = -super_size[i];
        dk -= nvi;
        nvk += nvi;
        nel += nvi;
        super_size[i] = 0;
        elem_count[i] = -1;
      } else {
        degree[i] = std::min(degree[i], d);
        adj[pn] = adj[p3];  // make room: swap a variable to the end
        adj[p3] = adj[p1];
        adj[p1] = k;  // element k becomes the first entry of i's list
        len[i] = pn - p1 + 1;
        hash %= n;
        deg_next[i] = hash_head[hash];
        hash_head[hash] = i;
        deg_prev[i] = hash;  // reuse prev slot to remember the bucket
      }
    }
    degree[k] = dk;
    lemax = std::max(lemax, dk);
    mark = clear_marks(mark + lemax, lemax, w, n);

    // Supervariable detection: nodes hashing together with identical
    // adjacency lists are merged.
    for (index_t pk = pk1; pk < pk2; ++pk) {
      index_t i = adj[pk];
      if (super_size[i] >= 0) continue;  // only nodes still flagged in Lk
      const index_t hash = deg_prev[i];
      i = hash_head[hash];
      hash_head[hash] = -1;
      for (; i != -1 && deg_next[i] != -1; i = deg_next[i], ++mark) {
        const index_t ln = len[i];
        const index_t eln = elem_count[i];
        for (index_t pe = cp[i] + 1; pe <= cp[i] + ln - 1; ++pe) {
          w[adj[pe]] = mark;
        }
        index_t jlast = i;
        index_t j = deg_next[i];
        while (j != -1) {
          bool same = len[j] == ln && elem_count[j] == eln;
          for (index_t pe = cp[j] + 1; same && pe <= cp[j] + ln - 1; ++pe) {
            if (w[adj[pe]] != mark) same = false;
          }
          if (same) {
            cp[j] = flip(i);  // j folds into supervariable i
            super_size[i] += super_size[j];
            super_size[j] = 0;
            elem_count[j] = -1;
            j = deg_next[j];
            deg_next[jlast] = j;
          } else {
            jlast = j;
            j = deg_next[j];
          }
        }
      }
    }

    // Finalize: restore sizes, reinsert live nodes with updated degrees.
    index_t pdst = pk1;
    for (index_t pk = pk1; pk < pk2; ++pk) {
      const index_t i = adj[pk];
      const index_t nvi = -super_size[i];
      if (nvi <= 0) continue;
      super_size[i] = nvi;
      index_t d = degree[i] + dk - nvi;
      d = std::min(d, n - nel - nvi);
      if (deg_head[d] != -1) deg_prev[deg_head[d]] = i;
      deg_next[i] = deg_head[d];
      deg_prev[i] = -1;
      deg_head[d] = i;
      mindeg = std::min(mindeg, d);
      degree[i] = d;
      adj[pdst++] = i;
    }
    super_size[k] = nvk;
    len[k] = pdst - pk1;
    if (len[k] == 0) {  // element with no live neighbours: a tree root
      cp[k] = -1;
      w[k] = 0;
    }
    if (elenk != 0) nz_used = pdst;
  }

  // Assemble tree -> postorder. cp currently holds flip(parent) links.
  for (index_t i = 0; i <= n; ++i) cp[i] = flip(cp[i]);
  std::fill(deg_head.begin(), deg_head.end(), -1);
  for (index_t j = n; j >= 0; --j) {  // absorbed variables first
    if (super_size[j] > 0) continue;
    deg_next[j] = deg_head[cp[j]];
    deg_head[cp[j]] = j;
  }
  for (index_t e = n; e >= 0; --e) {  // then the elements themselves
    if (super_size[e] <= 0) continue;
    if (cp[e] != -1) {
      deg_next[e] = deg_head[cp[e]];
      deg_head[cp[e]] = e;
    }
  }
  index_t kout = 0;
  for (index_t i = 0; i <= n; ++i) {
    if (cp[i] == -1) {
      kout = tree_postorder(i, kout, deg_head, deg_next, post, stack);
    }
  }

  std::vector<index_t> perm;
  perm.reserve(n);
  for (index_t i = 0; i <= n; ++i) {
    if (post[i] != n) perm.push_back(post[i]);
  }
  return Permutation::from_vector(std::move(perm));
}

}  // namespace hkkt
