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

#include "ptsokit/core/machines_tso.hpp"

namespace ptsokit {

using namespace encoding;

namespace {

void encode_sbs(std::string &out, const std::vector<StoreBuffer> &sbs) {
  for (const auto &b : sbs)
    put_seq(out, b, put_label);
}

void encode_pbs(std::string &out, const PerLocBuffers &pbs) {
  for (const auto &b : pbs)
    put_seq(out, b, [](std::string &o, const PlEntry &e) {
      put(o, e.fot);
      put(o, e.fot ? static_cast<Value>(e.tid) : e.val);
    });
}

bool sbs_empty(const std::vector<StoreBuffer> &sbs) {
  for (const auto &b : sbs)
    if (!b.empty())
      return false;
  return true;
}

// Observable steps shared by both TSO machines. `rdw` gives the value read
// through a store buffer, `append` performs the rmw persistence-buffer
// update and `fence_ok` the extra fence premise.
template <class S, class Rdw, class Append, class FenceOk>
void tso_observable(const S &s, std::span<const ThreadLabel> enabled, std::vector<MachineStep<S>> &out,
                    Rdw &&rdw, Append &&append, FenceOk &&fence_ok) {
  static const StoreBuffer empty;
  for (const auto &tl : enabled) {
    const Label &l = tl.lab;
    const StoreBuffer &b = s.sb[tl.tid];
    switch (l.kind()) {
    case Kind::W:
    case Kind::FL:
    case Kind::FO:
    case Kind::SF: {
      S n = s;
      n.sb[tl.tid].push_back(l);
      out.push_back({tl, std::move(n)});
      break;
    }
    case Kind::R:
      if (rdw(s, b, l.loc()) == l.val_r())
        out.push_back({tl, s});
      break;
    case Kind::U:
    case Kind::Rex:
      if (b.empty() && fence_ok(s, tl.tid) && rdw(s, empty, l.loc()) == l.val_r()) {
        S n = s;
        if (l.is(Kind::U))
          append(n, l.loc(), l.val_w());
        out.push_back({tl, std::move(n)});
      }
      break;
    case Kind::MF:
      if (b.empty() && fence_ok(s, tl.tid))
        out.push_back({tl, s});
      break;
    }
  }
}

} // namespace

PtsoState PtsoState::initial(const Memory &mem, std::size_t nthreads) {
  return {mem, {}, std::vector<StoreBuffer>(nthreads)};
}

void PtsoState::encode(std::string &out) const {
  put_seq(out, mem, [](std::string &o, Value v) { put(o, v); });
  put_seq(out, pb, [](std::string &o, const PbEntry &e) {
    put(o, e.per);
    put(o, e.loc);
    put(o, e.val);
  });
  encode_sbs(out, sb);
}

bool PtsoState::buffers_empty() const { return pb.empty() && sbs_empty(sb); }

PtsoSynState PtsoSynState::initial(const Memory &mem, std::size_t nthreads) {
  return {mem, PerLocBuffers(mem.size()), std::vector<StoreBuffer>(nthreads)};
}

void PtsoSynState::encode(std::string &out) const {
  put_seq(out, mem, [](std::string &o, Value v) { put(o, v); });
  encode_pbs(out, pbs);
  encode_sbs(out, sb);
}

bool PtsoSynState::buffers_empty() const {
  for (const auto &b : pbs)
    if (!b.empty())
      return false;
  return sbs_empty(sb);
}

Value rdw_ptso(const Memory &mem, const GlobalPersistenceBuffer &pb, const StoreBuffer &b, LocId x) {
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (it->is(Kind::W) && it->loc() == x)
      return it->val_w();
  for (auto it = pb.rbegin(); it != pb.rend(); ++it)
    if (!it->per && it->loc == x)
      return it->val;
  return mem[x];
}

Value rdw_ptsosyn(const Memory &mem, const LocBuffer &pbx, const StoreBuffer &b, LocId x) {
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (it->is(Kind::W) && it->loc() == x)
      return it->val_w();
  for (auto it = pbx.rbegin(); it != pbx.rend(); ++it)
    if (!it->fot)
      return it->val;
  return mem[x];
}

void ptso_successors(const PtsoState &s, std::span<const ThreadLabel> enabled,
                     std::vector<MachineStep<PtsoState>> &out) {
  tso_observable(
      s, enabled, out, [](const PtsoState &st, const StoreBuffer &b, LocId x) { return rdw_ptso(st.mem, st.pb, b, x); },
      [](PtsoState &st, LocId x, Value v) { st.pb.push_back(PbEntry::write(x, v)); },
      [](const PtsoState &, ThreadId) { return true; });

  for (ThreadId t = 0; t < s.sb.size(); ++t) {
    const StoreBuffer &b = s.sb[t];
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Label &e = b[i];
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const Label &p = b[j];
        switch (e.kind()) {
        case Kind::W:
          ok = !(p.is(Kind::W) || p.is(Kind::FL) || p.is(Kind::SF));
          break;
        case Kind::FL:
          ok = !(p.is(Kind::W) || p.is(Kind::FL) || p.is(Kind::SF) || (p.is(Kind::FO) && p.loc() == e.loc()));
          break;
        case Kind::FO:
          ok = !(p.is(Kind::SF) || ((p.is(Kind::W) || p.is(Kind::FL)) && p.loc() == e.loc()));
          break;
        default:
          ok = false;
          break;
        }
      }
      if (!ok)
        continue;
      PtsoState n = s;
      n.sb[t].erase(n.sb[t].begin() + static_cast<std::ptrdiff_t>(i));
      if (e.is(Kind::W))
        n.pb.push_back(PbEntry::write(e.loc(), e.val_w()));
      else if (e.is(Kind::FL) || e.is(Kind::FO))
        n.pb.push_back(PbEntry::persist(e.loc()));
      out.push_back({std::nullopt, std::move(n)});
    }
  }

  for (std::size_t i = 0; i < s.pb.size(); ++i) {
    const PbEntry &e = s.pb[i];
    bool ok = true;
    for (std::size_t j = 0; j < i && ok; ++j)
      ok = !(s.pb[j].per || s.pb[j].loc == e.loc);
    if (!ok)
      continue;
    PtsoState n = s;
    n.pb.erase(n.pb.begin() + static_cast<std::ptrdiff_t>(i));
    if (!e.per)
      n.mem[e.loc] = e.val;
    out.push_back({std::nullopt, std::move(n)});
  }
}

std::vector<MachineStep<PtsoState>> ptso_successors(const PtsoState &s, std::span<const ThreadLabel> enabled) {
  std::vector<MachineStep<PtsoState>> out;
  ptso_successors(s, enabled, out);
  return out;
}

void ptsosyn_successors(const PtsoSynState &s, std::span<const ThreadLabel> enabled,
                        std::vector<MachineStep<PtsoSynState>> &out) {
  tso_observable(
      s, enabled, out,
      [](const PtsoSynState &st, const StoreBuffer &b, LocId x) { return rdw_ptsosyn(st.mem, st.pbs[x], b, x); },
      [](PtsoSynState &st, LocId x, Value v) { st.pbs[x].push_back(PlEntry::value(v)); },
      [](const PtsoSynState &st, ThreadId t) { return !has_marker(st.pbs, t); });

  for (ThreadId t = 0; t < s.sb.size(); ++t) {
    const StoreBuffer &b = s.sb[t];
    if (b.empty())
      continue;
    const Label &h = b.front();
    if (h.is(Kind::W) || (h.is(Kind::FL) && s.pbs[h.loc()].empty()) ||
        (h.is(Kind::SF) && !has_marker(s.pbs, t))) {
      PtsoSynState n = s;
      n.sb[t].erase(n.sb[t].begin());
      if (h.is(Kind::W))
        n.pbs[h.loc()].push_back(PlEntry::value(h.val_w()));
      out.push_back({std::nullopt, std::move(n)});
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Label &e = b[i];
      if (!e.is(Kind::FO))
        continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const Label &p = b[j];
        ok = !(p.is(Kind::SF) || p.loc() == e.loc());
      }
      if (!ok)
        continue;
      PtsoSynState n = s;
      n.sb[t].erase(n.sb[t].begin() + static_cast<std::ptrdiff_t>(i));
      n.pbs[e.loc()].push_back(PlEntry::marker(t));
      out.push_back({std::nullopt, std::move(n)});
    }
  }

  for (LocId x = 0; x < s.pbs.size(); ++x) {
    if (s.pbs[x].empty())
      continue;
    PtsoSynState n = s;
    const PlEntry h = n.pbs[x].front();
    n.pbs[x].erase(n.pbs[x].begin());
    if (!h.fot)
      n.mem[x] = h.val;
    out.push_back({std::nullopt, std::move(n)});
  }
}

std::vector<MachineStep<PtsoSynState>> ptsosyn_successors(const PtsoSynState &s,
                                                          std::span<const ThreadLabel> enabled) {
  std::vector<MachineStep<PtsoSynState>> out;
  ptsosyn_successors(s, enabled, out);
  return out;
}

PtsoState drain(PtsoState s) {
  for (auto &b : s.sb) {
    for (const Label &e : b) {
      if (e.is(Kind::W))
        s.pb.push_back(PbEntry::write(e.loc(), e.val_w()));
      else if (e.is(Kind::FL) || e.is(Kind::FO))
        s.pb.push_back(PbEntry::persist(e.loc()));
    }
    b.clear();
  }
  for (const PbEntry &e : s.pb)
    if (!e.per)
      s.mem[e.loc] = e.val;
  s.pb.clear();
  return s;
}

namespace {

void persist_all(PtsoSynState &s, LocId x) {
  for (const PlEntry &e : s.pbs[x])
    if (!e.fot)
      s.mem[x] = e.val;
  s.pbs[x].clear();
}

} // namespace

PtsoSynState drain(PtsoSynState s) {
  for (ThreadId t = 0; t < s.sb.size(); ++t) {
    for (const Label &e : s.sb[t]) {
      switch (e.kind()) {
      case Kind::W:
        s.pbs[e.loc()].push_back(PlEntry::value(e.val_w()));
        break;
      case Kind::FL:
        persist_all(s, e.loc());
        break;
      case Kind::FO:
        s.pbs[e.loc()].push_back(PlEntry::marker(t));
        break;
      case Kind::SF:
        for (LocId x = 0; x < s.pbs.size(); ++x)
          persist_all(s, x);
        break;
      default:
        break;
      }
    }
    s.sb[t].clear();
  }
  for (LocId x = 0; x < s.pbs.size(); ++x)
    persist_all(s, x);
  return s;
}

} // namespace ptsokit
