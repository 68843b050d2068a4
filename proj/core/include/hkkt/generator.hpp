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

#ifndef HKKT_GENERATOR_HPP_
#define HKKT_GENERATOR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkkt/kkt_system.hpp"

namespace hkkt {

class GeneratorError : public std::runtime_error {
 public:
  explicit GeneratorError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Spectral character of the generated H_tilde relative to null(J).
enum class IndefinitenessClass {
  /// H_tilde indefinite overall but positive definite on null(J); the
  /// gamma shift is genuinely needed and suffices.
  kSpdOnNullspace,
  /// A negative diagonal direction inside null(J); no gamma rescues the
  /// factorization and the delta1 ladder is exercised.
  kIndefinite,
  /// One duplicated constraint row with a consistent right-hand side.
  kRankDeficientJ,
  /// Duplicated constraint row with contradicting right-hand sides,
  /// triggering the small-quadratic restart.
  kInconsistentRankDeficient,
};

const char* to_string(IndefinitenessClass c);
IndefinitenessClass indefiniteness_from_string(const std::string& name);

struct GeneratorSpec {
  index_t n_x = 40;
  index_t m_c = 10;
  index_t m_d = 8;
  index_t graph_degree = 4;  // sparsity of the underlying random graph
  IndefinitenessClass indefiniteness = IndefinitenessClass::kSpdOnNullspace;
  index_t sequence_length = 3;
  double drift = 0.01;  // relative value perturbation between matrices
  std::uint64_t seed = 1;

  void validate() const;
};

/// Generates a sequence with one shared sparsity pattern and slowly
/// drifting values. The requested indefiniteness class is verified with
/// the dense oracle at generation time (n_x <= 500) and a violation
/// throws GeneratorError.
std::vector<BlockKkt4x4> generate_systems(const GeneratorSpec& spec);

}  // namespace hkkt

#endif  // HKKT_GENERATOR_HPP_
