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

#include "ptsokit/core/labels.hpp"

#include <algorithm>
#include <set>

namespace ptsokit {

const char *kind_name(Kind k) {
  switch (k) {
  case Kind::R: return "R";
  case Kind::W: return "W";
  case Kind::U: return "U";
  case Kind::Rex: return "Rex";
  case Kind::MF: return "MF";
  case Kind::FL: return "FL";
  case Kind::FO: return "FO";
  case Kind::SF: return "SF";
  }
  return "?";
}

std::string Symbols::thread(ThreadId t) const {
  if (t < threads.size())
    return threads[t];
  return "t" + std::to_string(t);
}

std::string Symbols::reg(ThreadId t, std::size_t r) const {
  if (t < registers.size() && r < registers[t].size())
    return registers[t][r];
  return "r" + std::to_string(r + 1);
}

std::string Symbols::location(LocId x) const {
  if (x < locations.size())
    return locations[x];
  return "l" + std::to_string(x);
}

std::string to_string(const Label &lab, const Symbols *names) {
  std::string out = kind_name(lab.kind());
  if (!lab.has_loc())
    return out;
  out += '(';
  out += names ? names->location(lab.loc()) : "l" + std::to_string(lab.loc());
  if (lab.has_val_r()) {
    out += ',';
    out += std::to_string(lab.val_r());
  }
  if (lab.has_val_w()) {
    out += ',';
    out += std::to_string(lab.val_w());
  }
  out += ')';
  return out;
}

std::string to_string(const TraceEntry &e, const Symbols *names) {
  if (e.crash)
    return "crash";
  std::string t = names ? names->thread(e.tid) : "t" + std::to_string(e.tid);
  return t + ": " + to_string(e.lab, names);
}

std::vector<Label> restrict_trace(std::span<const TraceEntry> tr, ThreadId tid) {
  std::vector<Label> out;
  for (const auto &e : tr)
    if (!e.crash && e.tid == tid)
      out.push_back(e.lab);
  return out;
}

bool per_thread_prefix(std::span<const TraceEntry> shorter, std::span<const TraceEntry> longer) {
  std::set<ThreadId> tids;
  for (const auto &e : shorter)
    if (!e.crash)
      tids.insert(e.tid);
  for (ThreadId t : tids) {
    auto a = restrict_trace(shorter, t);
    auto b = restrict_trace(longer, t);
    if (a.size() > b.size() || !std::equal(a.begin(), a.end(), b.begin()))
      return false;
  }
  return true;
}

} // namespace ptsokit
