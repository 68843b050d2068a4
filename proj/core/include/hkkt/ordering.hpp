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

#ifndef HKKT_ORDERING_HPP_
#define HKKT_ORDERING_HPP_

#include "hkkt/csc_matrix.hpp"

namespace hkkt {

/// Approximate-minimum-degree fill-reducing ordering of a square pattern.
/// The pattern is symmetrized internally, so either triangle (or a full
/// matrix) may be passed. Deterministic: ties in the degree lists are
/// broken by the lowest original index.
Permutation amd_order(const CscMatrix& pattern);

}  // namespace hkkt

#endif  // HKKT_ORDERING_HPP_
