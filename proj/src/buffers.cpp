/*
 * Copyright (c) 2026 The ptsokit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ptsokit/core/buffers.hpp"

namespace ptsokit {

bool has_marker(const PerLocBuffers &pbs, ThreadId tid) {
  for (const auto &b : pbs)
    for (const auto &e : b)
      if (e.fot && e.tid == tid)
        return true;
  return false;
}

std::string to_string(const PbEntry &e, const Symbols *names) {
  std::string x = names ? names->location(e.loc) : "x" + std::to_string(e.loc);
  if (e.per)
    return "PER(" + x + ")";
  return "W(" + x + "," + std::to_string(e.val) + ")";
}

std::string to_string(const PlEntry &e, const Symbols *names) {
  if (e.fot)
    return "FOT(" + (names ? names->thread(e.tid) : "t" + std::to_string(e.tid)) + ")";
  return "V(" + std::to_string(e.val) + ")";
}

} // namespace ptsokit
