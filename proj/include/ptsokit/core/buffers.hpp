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

#ifndef PTSOKIT_CORE_BUFFERS_HPP
#define PTSOKIT_CORE_BUFFERS_HPP

#include "ptsokit/core/labels.hpp"

#include <compare>
#include <cstring>
#include <string>
#include <vector>

namespace ptsokit {

/// Store buffer entries are W, FL, FO and SF labels.
using StoreBuffer = std::vector<Label>;

/// Entry of the global persistence buffer: W(x,v) or PER(x).
struct PbEntry {
  bool per = false;
  LocId loc = 0;
  Value val = 0;

  static PbEntry write(LocId x, Value v) { return {false, x, v}; }
  static PbEntry persist(LocId x) { return {true, x, 0}; }

  friend auto operator<=>(const PbEntry &, const PbEntry &) = default;
};

using GlobalPersistenceBuffer = std::vector<PbEntry>;

/// Entry of a per-location persistence buffer: a value V(v) or a
/// flush-optimal marker FOT(tid).
struct PlEntry {
  bool fot = false;
  Value val = 0;
  ThreadId tid = 0;

  static PlEntry value(Value v) { return {false, v, 0}; }
  static PlEntry marker(ThreadId t) { return {true, 0, t}; }

  friend auto operator<=>(const PlEntry &, const PlEntry &) = default;
};

using LocBuffer = std::vector<PlEntry>;
using PerLocBuffers = std::vector<LocBuffer>;

/// True iff some buffer holds FOT(tid).
bool has_marker(const PerLocBuffers &pbs, ThreadId tid);

std::string to_string(const PbEntry &e, const Symbols *names = nullptr);
std::string to_string(const PlEntry &e, const Symbols *names = nullptr);

/// A memory subsystem transition: observable (matching a program label) or
/// silent.
template <class State> struct MachineStep {
  TransitionLabel label;
  State next;
};

namespace encoding {

template <class T> void put(std::string &out, const T &v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

inline void put_label(std::string &out, const Label &l) {
  put(out, static_cast<std::uint8_t>(l.kind()));
  put(out, l.loc());
  put(out, l.val_r());
  put(out, l.val_w());
}

template <class T, class F> void put_seq(std::string &out, const std::vector<T> &seq, F &&each) {
  put(out, static_cast<std::uint32_t>(seq.size()));
  for (const auto &e : seq)
    each(out, e);
}

} // namespace encoding

} // namespace ptsokit

#endif
