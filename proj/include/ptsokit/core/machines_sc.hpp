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

#ifndef PTSOKIT_CORE_MACHINES_SC_HPP
#define PTSOKIT_CORE_MACHINES_SC_HPP

#include "ptsokit/core/buffers.hpp"

#include <optional>
#include <span>

namespace ptsokit {

struct PscState {
  Memory mem;
  PerLocBuffers pbs;

  static PscState initial(const Memory &mem, std::size_t nthreads);
  void encode(std::string &out) const;

  friend auto operator<=>(const PscState &, const PscState &) = default;
};

/// Finite-state SC persistency. An unset volatile entry reads through to
/// the non-volatile memory; initial and post-crash states have every entry
/// unset.
struct PscfState {
  Memory mem;
  std::vector<std::optional<Value>> vmem;
  std::vector<bool> cp;  // locations whose later writes may still persist
  std::vector<bool> csf; // threads still allowed to fence

  static PscfState initial(const Memory &mem, std::size_t nthreads);
  Value volatile_value(LocId x) const { return vmem[x] ? *vmem[x] : mem[x]; }
  void encode(std::string &out) const;

  friend auto operator<=>(const PscfState &, const PscfState &) = default;
};

Value rdw_psc(const Memory &mem, const LocBuffer &pbx, LocId x);

void psc_successors(const PscState &s, std::span<const ThreadLabel> enabled,
                    std::vector<MachineStep<PscState>> &out);
std::vector<MachineStep<PscState>> psc_successors(const PscState &s, std::span<const ThreadLabel> enabled);

/// A flush of a location outside `cp` has no successor.
void pscf_successors(const PscfState &s, std::span<const ThreadLabel> enabled,
                     std::vector<MachineStep<PscfState>> &out);
std::vector<MachineStep<PscfState>> pscf_successors(const PscfState &s,
                                                    std::span<const ThreadLabel> enabled);

} // namespace ptsokit

#endif
