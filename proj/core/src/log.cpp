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

#include <cstdlib>
#include <iostream>
#include <mutex>

#include "hkkt/log.hpp"

namespace hkkt {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("HYBRID_KKT_LOG");
    if (!env) return 0;
    const int v = std::atoi(env);
    return v < 0 ? 0 : v;
  }();
  return level;
}

void log_message(int level, const std::string& message) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << (level >= 2 ? "[hybrid-kkt debug] " : "[hybrid-kkt] ")
            << message << "\n";
}

}  // namespace hkkt
