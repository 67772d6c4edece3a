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

#include "ptsokit/core/drf.hpp"

#include "ptsokit/core/machines_sc.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace ptsokit {

namespace {

bool racy_kind(const Label &l) { return l.is(Kind::R) || l.is(Kind::FO); }
bool writer_kind(const Label &l) { return l.is(Kind::W) || l.is(Kind::U); }

// Per-thread summary of the crashless suffix: bit x of `rd` (resp. `fo`) is
// set iff a read (resp. flush-optimal) of x would be unprotected after it.
struct Exposure {
  std::vector<std::uint64_t> rd, fo;

  void step(ThreadId t, const Label &l, std::uint64_t all) {
    switch (l.kind()) {
    case Kind::W:
      rd[t] = fo[t] = all & ~(std::uint64_t{1} << l.loc());
      break;
    case Kind::U:
    case Kind::Rex:
    case Kind::MF:
      rd[t] = fo[t] = 0;
      break;
    case Kind::SF:
      fo[t] = 0;
      break;
    default:
      break;
    }
  }
  bool exposed(ThreadId t, const Label &l) const {
    const std::uint64_t bit = std::uint64_t{1} << l.loc();
    return ((l.is(Kind::R) ? rd[t] : fo[t]) & bit) != 0;
  }
};

struct Node {
  ProgramState ps;
  PscState m;
  unsigned crashes = 0;
  Exposure exp;
  std::size_t parent = 0;
  std::optional<TraceEntry> entry;
};

std::optional<RaceReport> search(const LitmusTest &test, bool strong, std::size_t state_limit) {
  const Program &prog = test.program;
  const std::size_t nthreads = prog.num_threads();
  const std::size_t nlocs = prog.locations.size();
  if (strong && nlocs > 64)
    throw std::length_error("strong race search supports at most 64 locations");
  const std::uint64_t all = nlocs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nlocs) - 1;
  const Exposure clean{std::vector<std::uint64_t>(nthreads, 0), std::vector<std::uint64_t>(nthreads, 0)};

  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::size_t> work;
  std::string key;
  auto add = [&](ProgramState ps, PscState m, unsigned crashes, Exposure exp, std::size_t parent,
                 std::optional<TraceEntry> entry) {
    key.clear();
    for (const auto &t : ps.threads) {
      encoding::put(key, t.pc);
      for (Value v : t.regs)
        encoding::put(key, v);
    }
    m.encode(key);
    encoding::put(key, crashes);
    if (strong)
      for (ThreadId t = 0; t < nthreads; ++t) {
        encoding::put(key, exp.rd[t]);
        encoding::put(key, exp.fo[t]);
      }
    if (!seen.try_emplace(key, nodes.size()).second)
      return;
    if (nodes.size() >= state_limit)
      throw LimitExceeded("state count", state_limit);
    nodes.push_back({std::move(ps), std::move(m), crashes, std::move(exp), parent, entry});
    work.push_back(nodes.size() - 1);
  };

  const ProgramState init_ps = close_silent(initial_state(prog), prog);
  add(init_ps, PscState::initial(test.init, nthreads), 0, clean, 0, std::nullopt);

  auto trace_to = [&](std::size_t idx) {
    ObservableTrace tr;
    for (; idx != 0; idx = nodes[idx].parent)
      if (nodes[idx].entry)
        tr.push_back(*nodes[idx].entry);
    std::reverse(tr.begin(), tr.end());
    return tr;
  };

  std::vector<ProgramStep> psteps;
  std::vector<ThreadLabel> offer;
  std::vector<MachineStep<PscState>> msteps;
  while (!work.empty()) {
    const std::size_t idx = work.front();
    work.pop_front();
    const ProgramState ps = nodes[idx].ps;
    const PscState m = nodes[idx].m;
    const unsigned crashes = nodes[idx].crashes;
    const Exposure exp = nodes[idx].exp;

    for (ThreadId t = 0; t < nthreads; ++t)
      for (const Label &l : enabled_labels(ps, prog, t, test.universe)) {
        if (!racy_kind(l) || (strong && !exp.exposed(t, l)))
          continue;
        if (auto w = exhibits_race(ps, prog, t, l, test.universe))
          return RaceReport{ps, t, l, w->first, w->second, strong, trace_to(idx)};
      }

    psteps.clear();
    for (ThreadId t = 0; t < nthreads; ++t)
      thread_successors(ps, prog, t, test.universe, psteps);
    std::sort(psteps.begin(), psteps.end(),
              [](const ProgramStep &a, const ProgramStep &b) { return a.label < b.label; });
    offer.clear();
    for (const auto &s : psteps)
      if (offer.empty() || offer.back() != *s.label)
        offer.push_back(*s.label);
    msteps.clear();
    psc_successors(m, std::span<const ThreadLabel>(offer), msteps);
    for (auto &ms : msteps) {
      if (!ms.label) {
        add(ps, std::move(ms.next), crashes, exp, idx, std::nullopt);
        continue;
      }
      const TransitionLabel &want = ms.label;
      Exposure next_exp = exp;
      if (strong)
        next_exp.step(want->tid, want->lab, all);
      auto lo = std::partition_point(psteps.begin(), psteps.end(),
                                     [&](const ProgramStep &p) { return p.label < want; });
      auto hi = std::partition_point(lo, psteps.end(), [&](const ProgramStep &p) { return p.label == want; });
      for (auto it = lo; it != hi; ++it)
        add(close_silent(it->next, prog), ms.next, crashes, next_exp, idx,
            TraceEntry::event(want->tid, want->lab));
    }
    if (crashes < test.budget.max_crashes)
      add(init_ps, crash_step(m), crashes + 1, clean, idx, TraceEntry::crash_marker());
  }
  return std::nullopt;
}

} // namespace

std::optional<std::pair<ThreadId, Label>> exhibits_race(const ProgramState &ps, const Program &prog, ThreadId tid,
                                                        const Label &lab, std::span<const Value> universe) {
  if (!racy_kind(lab))
    return std::nullopt;
  const auto mine = enabled_labels(ps, prog, tid, universe);
  if (!std::binary_search(mine.begin(), mine.end(), lab))
    return std::nullopt;
  for (ThreadId t = 0; t < prog.num_threads(); ++t) {
    if (t == tid)
      continue;
    for (const Label &l : enabled_labels(ps, prog, t, universe))
      if (writer_kind(l) && l.loc() == lab.loc())
        return std::pair{t, l};
  }
  return std::nullopt;
}

std::optional<RaceReport> is_racy(const LitmusTest &test, std::size_t state_limit) {
  return search(test, false, state_limit);
}

std::optional<RaceReport> is_strongly_racy(const LitmusTest &test, std::size_t state_limit) {
  return search(test, true, state_limit);
}

bool unprotected_after(const Label &lab, std::span<const Label> rho) {
  if (!racy_kind(lab))
    throw std::invalid_argument("unprotected_after needs a read or flush-optimal label");
  const LocId x = lab.loc();
  bool exposed = false;
  for (const Label &l : rho) {
    if (l.is(Kind::W) && l.loc() != x)
      exposed = true;
    else if ((l.is(Kind::W) && l.loc() == x) || l.is(Kind::U) || l.is(Kind::Rex) || l.is(Kind::MF) ||
             (l.is(Kind::SF) && lab.is(Kind::FO)))
      exposed = false;
  }
  return exposed;
}

std::vector<Label> max_crashless_suffix(std::span<const TraceEntry> tr, ThreadId tid) {
  std::vector<Label> out;
  for (const auto &e : tr) {
    if (e.crash)
      out.clear();
    else if (e.tid == tid)
      out.push_back(e.lab);
  }
  return out;
}

bool g_unprotected(const ExecutionGraph &g, std::size_t e) {
  const Label &le = g.events.at(e).lab;
  if (!racy_kind(le))
    throw std::invalid_argument("g_unprotected needs a read or flush-optimal event");
  const LocId x = le.loc();
  const Relation p = po(g);
  std::uint64_t barriers = (g.kind_mask({Kind::W}) & g.loc_mask(x)) | g.kind_mask({Kind::U, Kind::Rex, Kind::MF});
  if (le.is(Kind::FO))
    barriers |= g.kind_mask({Kind::SF});
  const std::uint64_t before_e = p.inverse().row(e);
  for (std::size_t w = 0; w < g.size(); ++w) {
    const Event &ev = g.events[w];
    if (ev.is_init() || !ev.lab.is(Kind::W) || ev.lab.loc() == x || !p.has(w, e))
      continue;
    if (!(p.row(w) & barriers & before_e))
      return true;
  }
  return false;
}

namespace {

SequentialProgram fence_thread(const SequentialProgram &sp, std::size_t nlocs) {
  if (nlocs > 64)
    throw std::length_error("fence insertion supports at most 64 locations");
  const std::uint64_t all = nlocs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nlocs) - 1;
  const std::size_t n = sp.code.size();
  std::vector<std::uint64_t> in_rd(n + 1, 0), in_fo(n + 1, 0);
  std::vector<std::optional<Instruction>> before(n);
  for (std::size_t pc = 0; pc < n; ++pc) {
    const Instruction &ins = sp.code[pc];
    if (ins.op == Op::IfGoto && ins.target <= pc)
      throw std::invalid_argument("fence insertion needs acyclic code");
    std::uint64_t rd = in_rd[pc], fo = in_fo[pc];
    const std::uint64_t bit = std::uint64_t{1} << ins.loc;
    switch (ins.op) {
    case Op::Write:
      rd = fo = all & ~bit;
      break;
    case Op::Fadd:
    case Op::Cas:
    case Op::Mfence:
      rd = fo = 0;
      break;
    case Op::Sfence:
      fo = 0;
      break;
    case Op::Read:
      if (rd & bit) {
        before[pc] = Instruction::mfence();
        rd = fo = 0;
      }
      break;
    case Op::FlushOpt:
      if (fo & bit) {
        before[pc] = Instruction::sfence();
        fo = 0;
      }
      break;
    default:
      break;
    }
    auto flow = [&](std::size_t to) {
      to = std::min(to, n);
      in_rd[to] |= rd;
      in_fo[to] |= fo;
    };
    if (ins.op == Op::IfGoto) {
      const bool constant = ins.e1.op == Expr::Op::Const;
      if (!constant || ins.e1.value != 0)
        flow(ins.target);
      if (!constant || ins.e1.value == 0)
        flow(pc + 1);
    } else {
      flow(pc + 1);
    }
  }
  if (std::none_of(before.begin(), before.end(), [](const auto &b) { return b.has_value(); }))
    return sp;
  std::vector<Pc> start(n + 1);
  Pc pos = 0;
  for (std::size_t pc = 0; pc < n; ++pc) {
    start[pc] = pos;
    pos += before[pc] ? 2 : 1;
  }
  start[n] = pos;
  SequentialProgram out{sp.name, sp.regs, {}};
  for (std::size_t pc = 0; pc < n; ++pc) {
    if (before[pc])
      out.code.push_back(*before[pc]);
    Instruction ins = sp.code[pc];
    if (ins.op == Op::IfGoto)
      ins.target = start[std::min<std::size_t>(ins.target, n)];
    out.code.push_back(std::move(ins));
  }
  return out;
}

} // namespace

Program insert_fences(const Program &prog) {
  Program out = prog;
  for (auto &sp : out.threads)
    sp = fence_thread(sp, prog.locations.size());
  return out;
}

LitmusTest insert_fences(const LitmusTest &test) {
  LitmusTest out = test;
  out.program = insert_fences(test.program);
  return out;
}

} // namespace ptsokit
