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

#ifndef PTSOKIT_CORE_MACHINES_TSO_HPP
#define PTSOKIT_CORE_MACHINES_TSO_HPP

#include "ptsokit/core/buffers.hpp"

#include <span>

namespace ptsokit {

struct PtsoState {
  Memory mem;
  GlobalPersistenceBuffer pb;
  std::vector<StoreBuffer> sb;

  static PtsoState initial(const Memory &mem, std::size_t nthreads);
  void encode(std::string &out) const;
  bool buffers_empty() const;

  friend auto operator<=>(const PtsoState &, const PtsoState &) = default;
};

struct PtsoSynState {
  Memory mem;
  PerLocBuffers pbs;
  std::vector<StoreBuffer> sb;

  static PtsoSynState initial(const Memory &mem, std::size_t nthreads);
  void encode(std::string &out) const;
  bool buffers_empty() const;

  friend auto operator<=>(const PtsoSynState &, const PtsoSynState &) = default;
};

/// Latest value of `x` visible to a thread with store buffer `b`.
Value rdw_ptso(const Memory &mem, const GlobalPersistenceBuffer &pb, const StoreBuffer &b, LocId x);
Value rdw_ptsosyn(const Memory &mem, const LocBuffer &pbx, const StoreBuffer &b, LocId x);

/// Observable steps admitted for the offered labels, plus every silent step.
void ptso_successors(const PtsoState &s, std::span<const ThreadLabel> enabled,
                     std::vector<MachineStep<PtsoState>> &out);
std::vector<MachineStep<PtsoState>> ptso_successors(const PtsoState &s,
                                                    std::span<const ThreadLabel> enabled);

void ptsosyn_successors(const PtsoSynState &s, std::span<const ThreadLabel> enabled,
                        std::vector<MachineStep<PtsoSynState>> &out);
std::vector<MachineStep<PtsoSynState>> ptsosyn_successors(const PtsoSynState &s,
                                                          std::span<const ThreadLabel> enabled);

/// Empties every buffer with silent steps taken in a fixed order: each
/// thread's store buffer head first, then the persistence buffers.
PtsoState drain(PtsoState s);
PtsoSynState drain(PtsoSynState s);

} // namespace ptsokit

#endif
