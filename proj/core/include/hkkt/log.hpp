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

#ifndef HKKT_LOG_HPP_
#define HKKT_LOG_HPP_

#include <string>

namespace hkkt {

/// Verbosity from the HYBRID_KKT_LOG environment variable:
/// 0 (default) quiet, 1 info, 2 debug. Read once per process.
int log_level();

void log_message(int level, const std::string& message);

#define HKKT_LOG_INFO(msg)                      \
  do {                                          \
    if (::hkkt::log_level() >= 1) ::hkkt::log_message(1, (msg)); \
  } while (0)

#define HKKT_LOG_DEBUG(msg)                     \
  do {                                          \
    if (::hkkt::log_level() >= 2) ::hkkt::log_message(2, (msg)); \
  } while (0)

}  // namespace hkkt

#endif  // HKKT_LOG_HPP_
