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

#include "ptsokit/core/machines_sc.hpp"

namespace ptsokit {

using namespace encoding;

PscState PscState::initial(const Memory &mem, std::size_t) { return {mem, PerLocBuffers(mem.size())}; }

void PscState::encode(std::string &out) const {
  put_seq(out, mem, [](std::string &o, Value v) { put(o, v); });
  for (const auto &b : pbs)
    put_seq(out, b, [](std::string &o, const PlEntry &e) {
      put(o, e.fot);
      put(o, e.fot ? static_cast<Value>(e.tid) : e.val);
    });
}

PscfState PscfState::initial(const Memory &mem, std::size_t nthreads) {
  return {mem, std::vector<std::optional<Value>>(mem.size()), std::vector<bool>(mem.size(), true),
          std::vector<bool>(nthreads, true)};
}

void PscfState::encode(std::string &out) const {
  put_seq(out, mem, [](std::string &o, Value v) { put(o, v); });
  for (const auto &v : vmem) {
    put(out, v.has_value());
    put(out, v.value_or(0));
  }
  for (bool b : cp)
    put(out, b);
  for (bool b : csf)
    put(out, b);
}

Value rdw_psc(const Memory &mem, const LocBuffer &pbx, LocId x) {
  for (auto it = pbx.rbegin(); it != pbx.rend(); ++it)
    if (!it->fot)
      return it->val;
  return mem[x];
}

void psc_successors(const PscState &s, std::span<const ThreadLabel> enabled,
                    std::vector<MachineStep<PscState>> &out) {
  for (const auto &tl : enabled) {
    const Label &l = tl.lab;
    switch (l.kind()) {
    case Kind::W: {
      PscState n = s;
      n.pbs[l.loc()].push_back(PlEntry::value(l.val_w()));
      out.push_back({tl, std::move(n)});
      break;
    }
    case Kind::R:
      if (rdw_psc(s.mem, s.pbs[l.loc()], l.loc()) == l.val_r())
        out.push_back({tl, s});
      break;
    case Kind::U:
    case Kind::Rex:
      if (!has_marker(s.pbs, tl.tid) && rdw_psc(s.mem, s.pbs[l.loc()], l.loc()) == l.val_r()) {
        PscState n = s;
        if (l.is(Kind::U))
          n.pbs[l.loc()].push_back(PlEntry::value(l.val_w()));
        out.push_back({tl, std::move(n)});
      }
      break;
    case Kind::MF:
    case Kind::SF:
      if (!has_marker(s.pbs, tl.tid))
        out.push_back({tl, s});
      break;
    case Kind::FL:
      if (s.pbs[l.loc()].empty())
        out.push_back({tl, s});
      break;
    case Kind::FO: {
      PscState n = s;
      n.pbs[l.loc()].push_back(PlEntry::marker(tl.tid));
      out.push_back({tl, std::move(n)});
      break;
    }
    }
  }
  for (LocId x = 0; x < s.pbs.size(); ++x) {
    if (s.pbs[x].empty())
      continue;
    PscState n = s;
    const PlEntry h = n.pbs[x].front();
    n.pbs[x].erase(n.pbs[x].begin());
    if (!h.fot)
      n.mem[x] = h.val;
    out.push_back({std::nullopt, std::move(n)});
  }
}

std::vector<MachineStep<PscState>> psc_successors(const PscState &s, std::span<const ThreadLabel> enabled) {
  std::vector<MachineStep<PscState>> out;
  psc_successors(s, enabled, out);
  return out;
}

void pscf_successors(const PscfState &s, std::span<const ThreadLabel> enabled,
                     std::vector<MachineStep<PscfState>> &out) {
  for (const auto &tl : enabled) {
    const Label &l = tl.lab;
    const LocId x = l.loc();
    const bool fence_ok = s.csf[tl.tid];
    switch (l.kind()) {
    case Kind::W:
    case Kind::U: {
      if (l.is(Kind::U) && (!fence_ok || s.volatile_value(x) != l.val_r()))
        break;
      if (s.cp[x]) {
        PscfState n = s;
        n.mem[x] = l.val_w();
        n.vmem[x] = l.val_w();
        out.push_back({tl, std::move(n)});
      }
      PscfState n = s;
      n.vmem[x] = l.val_w();
      n.cp[x] = false;
      out.push_back({tl, std::move(n)});
      break;
    }
    case Kind::R:
      if (s.volatile_value(x) == l.val_r())
        out.push_back({tl, s});
      break;
    case Kind::Rex:
      if (fence_ok && s.volatile_value(x) == l.val_r())
        out.push_back({tl, s});
      break;
    case Kind::MF:
    case Kind::SF:
      if (fence_ok)
        out.push_back({tl, s});
      break;
    case Kind::FL:
      if (s.cp[x])
        out.push_back({tl, s});
      break;
    case Kind::FO: {
      if (s.cp[x])
        out.push_back({tl, s});
      PscfState n = s;
      n.cp[x] = false;
      n.csf[tl.tid] = false;
      out.push_back({tl, std::move(n)});
      break;
    }
    }
  }
}

std::vector<MachineStep<PscfState>> pscf_successors(const PscfState &s, std::span<const ThreadLabel> enabled) {
  std::vector<MachineStep<PscfState>> out;
  pscf_successors(s, enabled, out);
  return out;
}

} // namespace ptsokit
