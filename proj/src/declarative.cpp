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

#include "ptsokit/core/declarative.hpp"

#include "ptsokit/core/explorer.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace ptsokit {

namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

template <class F> void for_each_bit(std::uint64_t m, F &&f) {
  while (m) {
    std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
    f(i);
    m &= m - 1;
  }
}

bool is_read_like(const Label &l) { return l.is(Kind::R) || l.is(Kind::U) || l.is(Kind::Rex); }
bool is_write_like(const Label &l) { return l.is(Kind::W) || l.is(Kind::U); }

} // namespace

Relation::Relation(std::size_t n) : rows_(n, 0) {
  if (n > kMaxEvents)
    throw std::length_error("relations support at most 64 events");
}

bool Relation::empty() const {
  return std::all_of(rows_.begin(), rows_.end(), [](std::uint64_t r) { return r == 0; });
}

std::size_t Relation::count() const {
  std::size_t c = 0;
  for (auto r : rows_)
    c += static_cast<std::size_t>(std::popcount(r));
  return c;
}

Relation &Relation::operator|=(const Relation &o) {
  for (std::size_t i = 0; i < rows_.size(); ++i)
    rows_[i] |= o.rows_[i];
  return *this;
}

Relation operator*(const Relation &a, const Relation &b) {
  Relation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t acc = 0;
    for_each_bit(a.rows_[i], [&](std::size_t j) { acc |= b.rows_[j]; });
    out.rows_[i] = acc;
  }
  return out;
}

Relation Relation::inverse() const {
  Relation out(size());
  for (std::size_t i = 0; i < size(); ++i)
    for_each_bit(rows_[i], [&](std::size_t j) { out.add(j, i); });
  return out;
}

Relation Relation::closure() const {
  Relation out = *this;
  for (std::size_t k = 0; k < size(); ++k)
    for (std::size_t i = 0; i < size(); ++i)
      if (out.has(i, k))
        out.rows_[i] |= out.rows_[k];
  return out;
}

Relation Relation::reflexive() const {
  Relation out = *this;
  for (std::size_t i = 0; i < size(); ++i)
    out.add(i, i);
  return out;
}

bool Relation::irreflexive() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (has(i, i))
      return false;
  return true;
}

bool Relation::subset_of(const Relation &o) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (rows_[i] & ~o.rows_[i])
      return false;
  return true;
}

Relation Relation::restrict(std::uint64_t dom, std::uint64_t codom) const {
  Relation out(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (dom & bit(i))
      out.rows_[i] = rows_[i] & codom;
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for_each_bit(rows_[i], [&](std::size_t j) { out.emplace_back(i, j); });
  return out;
}

std::uint64_t ExecutionGraph::mask(const std::function<bool(const Event &)> &pred) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (pred(events[i]))
      m |= bit(i);
  return m;
}

std::uint64_t ExecutionGraph::kind_mask(std::initializer_list<Kind> kinds) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < events.size(); ++i)
    for (Kind k : kinds)
      if (events[i].lab.is(k))
        m |= bit(i);
  return m;
}

std::uint64_t ExecutionGraph::loc_mask(LocId x) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].lab.has_loc() && events[i].lab.loc() == x)
      m |= bit(i);
  return m;
}

std::uint64_t ExecutionGraph::init_mask() const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].is_init())
      m |= bit(i);
  return m;
}

ExecutionGraph make_graph(const Memory &init, const std::vector<std::vector<Label>> &threads) {
  ExecutionGraph g;
  for (LocId x = 0; x < init.size(); ++x)
    g.events.push_back(Event{std::nullopt, 0, Label::write(x, init[x])});
  for (ThreadId t = 0; t < threads.size(); ++t)
    for (std::size_t i = 0; i < threads[t].size(); ++i)
      g.events.push_back(Event{t, static_cast<std::uint32_t>(i + 1), threads[t][i]});
  if (g.events.size() > Relation::kMaxEvents)
    throw std::length_error("execution graphs support at most 64 events");
  g.rf.assign(g.events.size(), -1);
  g.mem_assign.assign(init.size(), -1);
  return g;
}

bool well_formed(const ExecutionGraph &g) {
  if (g.rf.size() != g.size())
    return false;
  for (std::size_t r = 0; r < g.size(); ++r) {
    const Label &l = g.events[r].lab;
    if (!is_read_like(l)) {
      if (g.rf[r] != -1)
        return false;
      continue;
    }
    if (g.rf[r] < 0 || static_cast<std::size_t>(g.rf[r]) >= g.size())
      return false;
    const Label &w = g.events[static_cast<std::size_t>(g.rf[r])].lab;
    if (!is_write_like(w) || w.loc() != l.loc() || w.val_w() != l.val_r() ||
        static_cast<std::size_t>(g.rf[r]) == r)
      return false;
  }
  for (LocId x = 0; x < g.num_locations(); ++x) {
    int m = g.mem_assign[x];
    if (m < 0 || static_cast<std::size_t>(m) >= g.size())
      return false;
    const Label &w = g.events[static_cast<std::size_t>(m)].lab;
    if (!is_write_like(w) || w.loc() != x)
      return false;
  }
  return true;
}

Relation po(const ExecutionGraph &g) {
  Relation r(g.size());
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) {
      const Event &ea = g.events[a], &eb = g.events[b];
      if ((ea.is_init() && !eb.is_init()) ||
          (!ea.is_init() && !eb.is_init() && ea.tid == eb.tid && ea.sn < eb.sn))
        r.add(a, b);
    }
  return r;
}

Relation rf_relation(const ExecutionGraph &g) {
  Relation r(g.size());
  for (std::size_t e = 0; e < g.size(); ++e)
    if (g.rf[e] >= 0)
      r.add(static_cast<std::size_t>(g.rf[e]), e);
  return r;
}

Relation rfe(const ExecutionGraph &g) {
  Relation r = rf_relation(g);
  Relation p = po(g);
  for (auto [a, b] : r.pairs())
    if (p.has(a, b))
      r.remove(a, b);
  return r;
}

Memory mem_of(const ExecutionGraph &g) {
  Memory m(g.num_locations(), 0);
  for (LocId x = 0; x < g.num_locations(); ++x)
    m[x] = g.events[static_cast<std::size_t>(g.mem_assign[x])].lab.val_w();
  return m;
}

Memory mem_init_of(const ExecutionGraph &g) {
  Memory m(g.num_locations(), 0);
  for (const auto &e : g.events)
    if (e.is_init())
      m[e.lab.loc()] = e.lab.val_w();
  return m;
}

Relation fr(const ExecutionGraph &g, const Relation &order) {
  Relation out(g.size());
  for (std::size_t r = 0; r < g.size(); ++r) {
    const Label &l = g.events[r].lab;
    if (!is_read_like(l) || g.rf[r] < 0)
      continue;
    std::uint64_t writes = g.kind_mask({Kind::W, Kind::U}) & g.loc_mask(l.loc());
    std::uint64_t later = order.row(static_cast<std::size_t>(g.rf[r])) & writes & ~bit(r);
    for_each_bit(later, [&](std::size_t w) { out.add(r, w); });
  }
  return out;
}

std::uint64_t flo(const ExecutionGraph &g, LocId x) {
  const std::uint64_t at_x = g.loc_mask(x);
  std::uint64_t out = g.kind_mask({Kind::FL}) & at_x;
  const std::uint64_t fences = g.kind_mask({Kind::U, Kind::Rex, Kind::MF, Kind::SF});
  const Relation p = po(g);
  for_each_bit(g.kind_mask({Kind::FO}) & at_x, [&](std::size_t f) {
    if (p.row(f) & fences)
      out |= bit(f);
  });
  return out;
}

Relation dtpo(const ExecutionGraph &g, const Relation &order) {
  Relation out(g.size());
  const std::uint64_t writes = g.kind_mask({Kind::W, Kind::U});
  for (LocId x = 0; x < g.num_locations(); ++x) {
    std::uint64_t targets = order.row(static_cast<std::size_t>(g.mem_assign[x])) & writes & g.loc_mask(x);
    for_each_bit(flo(g, x), [&](std::size_t f) {
      for_each_bit(targets, [&](std::size_t w) { out.add(f, w); });
    });
  }
  return out;
}

Relation ppo(const ExecutionGraph &g) {
  Relation out = po(g);
  for (auto [a, b] : out.pairs()) {
    const Label &la = g.events[a].lab, &lb = g.events[b].lab;
    bool a_store = la.is(Kind::W) || la.is(Kind::FL) || la.is(Kind::FO);
    if ((a_store || la.is(Kind::SF)) && lb.is(Kind::R))
      out.remove(a, b);
    else if (a_store && la.loc() != lb.loc() && lb.is(Kind::FO))
      out.remove(a, b);
  }
  return out;
}

Relation order_relation(std::size_t n, const PropagationOrder &seq) {
  Relation r(n);
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      r.add(seq[i], seq[j]);
  return r;
}

namespace {

// po edges that condition (1) forces into the propagation order.
Relation forced_by_po(const ExecutionGraph &g, const Relation &p) {
  Relation out(g.size());
  for (auto [a, b] : p.pairs()) {
    const Label &la = g.events[a].lab, &lb = g.events[b].lab;
    if (la.is(Kind::R) || lb.is(Kind::R))
      continue;
    bool a_store = la.is(Kind::W) || la.is(Kind::FL) || la.is(Kind::FO);
    if (a_store && lb.is(Kind::FO) && la.loc() != lb.loc())
      continue;
    out.add(a, b);
  }
  return out;
}

struct Derived {
  Relation po, rfe;
  std::uint64_t fenceish = 0; // U, Rex, MF
};

Derived derive(const ExecutionGraph &g) {
  return {po(g), rfe(g), g.kind_mask({Kind::U, Kind::Rex, Kind::MF})};
}

bool check_dptso(const ExecutionGraph &g, const Derived &d, const Relation &t) {
  if (!(t.reflexive() * d.rfe * d.po.reflexive()).irreflexive())
    return false;
  const Relation f = fr(g, t);
  if (!(f * d.rfe.reflexive() * d.po).irreflexive())
    return false;
  const Relation ft = f * t;
  if (!ft.irreflexive())
    return false;
  if (!(ft * d.rfe * d.po).irreflexive())
    return false;
  Relation fence_po = d.po.restrict(d.fenceish, ~std::uint64_t{0});
  if (!(ft * fence_po).irreflexive())
    return false;
  if (!(dtpo(g, t) * t).irreflexive())
    return false;
  return true;
}

} // namespace

bool dptso_conditions(const ExecutionGraph &g, const PropagationOrder &tpo) {
  const std::uint64_t propagated = ~g.kind_mask({Kind::R}) & (g.size() == 64 ? ~0ull : bit(g.size()) - 1);
  std::uint64_t seen = 0;
  for (std::size_t e : tpo) {
    if (e >= g.size() || !(propagated & bit(e)) || (seen & bit(e)))
      return false;
    seen |= bit(e);
  }
  if (seen != propagated)
    return false;
  const Derived d = derive(g);
  const Relation t = order_relation(g.size(), tpo);
  if (!forced_by_po(g, d.po).subset_of(t))
    return false;
  return check_dptso(g, d, t);
}

std::optional<PropagationOrder> consistent_dptso(const ExecutionGraph &g) {
  const std::size_t n = g.size();
  const Derived d = derive(g);
  Relation forced = forced_by_po(g, d.po);
  // Condition (2) with tpo? as the identity or a single edge: an external
  // read must follow its source, and so must every propagated event after it.
  const std::uint64_t reads = g.kind_mask({Kind::R});
  for (auto [w, r] : d.rfe.pairs()) {
    std::uint64_t after = (d.po.row(r) | bit(r)) & ~reads;
    if (after & bit(w))
      return std::nullopt;
    for_each_bit(after, [&](std::size_t a) { forced.add(w, a); });
  }
  std::vector<std::uint64_t> preds(n, 0);
  for (auto [a, b] : forced.pairs())
    preds[b] |= bit(a);

  // Initialization events go first; the relative placement of an
  // initialization write and a flush-optimal of another location, and of
  // initialization writes among themselves, is unobservable.
  PropagationOrder seq;
  std::uint64_t placed = 0;
  const std::uint64_t init = g.init_mask();
  for_each_bit(init, [&](std::size_t i) {
    seq.push_back(i);
    placed |= bit(i);
  });
  const std::uint64_t todo = ~reads & ~init & (n == 64 ? ~0ull : bit(n) - 1);
  std::optional<PropagationOrder> found;
  std::function<void(std::uint64_t)> dfs = [&](std::uint64_t left) {
    if (found)
      return;
    if (!left) {
      if (check_dptso(g, d, order_relation(n, seq)))
        found = seq;
      return;
    }
    for_each_bit(left, [&](std::size_t e) {
      if (found || (preds[e] & ~placed))
        return;
      seq.push_back(e);
      placed |= bit(e);
      dfs(left & ~bit(e));
      placed &= ~bit(e);
      seq.pop_back();
    });
  };
  dfs(todo);
  return found;
}

namespace {

Relation hb_base(const ExecutionGraph &g, const Relation &mo, bool sc) {
  Relation r = sc ? po(g) | rf_relation(g) : ppo(g) | rfe(g);
  r |= mo;
  r |= fr(g, mo);
  r |= dtpo(g, mo);
  return r;
}

bool is_modification_order(const ExecutionGraph &g, const Relation &mo) {
  const std::uint64_t writes = g.kind_mask({Kind::W, Kind::U});
  for (auto [a, b] : mo.pairs()) {
    const Label &la = g.events[a].lab, &lb = g.events[b].lab;
    if (!(writes & bit(a)) || !(writes & bit(b)) || la.loc() != lb.loc())
      return false;
  }
  if (!mo.irreflexive() || !(mo * mo).subset_of(mo))
    return false;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if ((writes & bit(a)) && (writes & bit(b)) && g.events[a].lab.loc() == g.events[b].lab.loc() &&
          !mo.has(a, b) && !mo.has(b, a))
        return false;
  return true;
}

template <class Accept> std::optional<Relation> search_mo(const ExecutionGraph &g, Accept &&accept) {
  std::vector<std::vector<std::size_t>> per_loc(g.num_locations());
  for (std::size_t e = 0; e < g.size(); ++e)
    if (is_write_like(g.events[e].lab) && !g.events[e].is_init())
      per_loc[g.events[e].lab.loc()].push_back(e);
  std::vector<std::size_t> init_of(g.num_locations(), g.size());
  for (std::size_t e = 0; e < g.size(); ++e)
    if (g.events[e].is_init())
      init_of[g.events[e].lab.loc()] = e;
  for (auto &v : per_loc)
    std::sort(v.begin(), v.end());
  std::optional<Relation> found;
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (found)
      return;
    if (x == per_loc.size()) {
      Relation mo(g.size());
      for (LocId y = 0; y < per_loc.size(); ++y) {
        std::vector<std::size_t> chain;
        if (init_of[y] < g.size())
          chain.push_back(init_of[y]);
        chain.insert(chain.end(), per_loc[y].begin(), per_loc[y].end());
        for (std::size_t i = 0; i < chain.size(); ++i)
          for (std::size_t j = i + 1; j < chain.size(); ++j)
            mo.add(chain[i], chain[j]);
      }
      if (accept(mo))
        found = mo;
      return;
    }
    // The initialization write is mo-first: it is ppo- and po-before every
    // other write to the location.
    auto &v = per_loc[x];
    do {
      rec(x + 1);
    } while (!found && std::next_permutation(v.begin(), v.end()));
  };
  rec(0);
  return found;
}

} // namespace

bool dptsomo_conditions(const ExecutionGraph &g, const Relation &mo) {
  if (!is_modification_order(g, mo))
    return false;
  if (!hb_base(g, mo, false).acyclic())
    return false;
  return (fr(g, mo) * po(g)).irreflexive();
}

bool dpsc_conditions(const ExecutionGraph &g, const Relation &mo) {
  if (!is_modification_order(g, mo))
    return false;
  return hb_base(g, mo, true).acyclic();
}

std::optional<Relation> consistent_dptsomo(const ExecutionGraph &g) {
  const Relation base_ppo = ppo(g) | rfe(g);
  const Relation p = po(g);
  return search_mo(g, [&](const Relation &mo) {
    Relation f = fr(g, mo);
    if (!(f * p).irreflexive())
      return false;
    Relation hb = base_ppo | mo | f | dtpo(g, mo);
    return hb.acyclic();
  });
}

std::optional<Relation> consistent_dpsc(const ExecutionGraph &g) {
  const Relation base = po(g) | rf_relation(g);
  return search_mo(g, [&](const Relation &mo) { return (base | mo | fr(g, mo) | dtpo(g, mo)).acyclic(); });
}

const char *dec_model_name(DecModel m) {
  switch (m) {
  case DecModel::Dptso: return "dptso";
  case DecModel::Dptsomo: return "dptsomo";
  case DecModel::Dpsc: return "dpsc";
  }
  return "?";
}

std::optional<DecModel> parse_dec_model(std::string_view name) {
  for (DecModel m : {DecModel::Dptso, DecModel::Dptsomo, DecModel::Dpsc})
    if (name == dec_model_name(m))
      return m;
  return std::nullopt;
}

bool consistent(const ExecutionGraph &g, DecModel m) {
  switch (m) {
  case DecModel::Dptso: return consistent_dptso(g).has_value();
  case DecModel::Dptsomo: return consistent_dptsomo(g).has_value();
  case DecModel::Dpsc: return consistent_dpsc(g).has_value();
  }
  return false;
}

namespace {

void close_thread(ThreadState &ts, const SequentialProgram &sp) {
  while (ts.pc < sp.code.size()) {
    const Instruction &ins = sp.code[ts.pc];
    if (ins.op == Op::Assign) {
      ts.regs[ins.reg] = ins.e1.eval(ts.regs);
      ++ts.pc;
    } else if (ins.op == Op::IfGoto) {
      Pc next = ins.e1.eval(ts.regs) != 0 ? ins.target : ts.pc + 1;
      if (next <= ts.pc)
        throw std::invalid_argument("graph generation needs acyclic code");
      ts.pc = next;
    } else {
      break;
    }
  }
}

struct ThreadPrefix {
  std::vector<Label> labels;
  ThreadState state;
};

std::vector<ThreadPrefix> thread_prefixes(const Program &prog, ThreadId tid, std::span<const Value> universe) {
  std::vector<ThreadPrefix> out;
  ProgramState ps = initial_state(prog);
  close_thread(ps.threads[tid], prog.threads[tid]);
  std::vector<Label> labels;
  std::vector<ProgramStep> steps;
  std::function<void(const ProgramState &)> rec = [&](const ProgramState &cur) {
    out.push_back({labels, cur.threads[tid]});
    std::vector<ProgramStep> local;
    thread_successors(cur, prog, tid, universe, local);
    for (auto &s : local) {
      close_thread(s.next.threads[tid], prog.threads[tid]);
      labels.push_back(s.label->lab);
      rec(s.next);
      labels.pop_back();
    }
  };
  rec(ps);
  return out;
}

// Enumerates (E, rf) skeletons; M is left unset.
void generate_skeletons(const Program &prog, const Memory &init, std::span<const Value> universe,
                        const std::function<bool(ExecutionGraph &, const ProgramState &)> &visit) {
  const std::size_t nthreads = prog.num_threads();
  std::vector<std::vector<ThreadPrefix>> prefixes;
  for (ThreadId t = 0; t < nthreads; ++t)
    prefixes.push_back(thread_prefixes(prog, t, universe));
  std::vector<std::size_t> choice(nthreads, 0);
  bool stop = false;
  std::function<void(std::size_t)> pick = [&](std::size_t t) {
    if (stop)
      return;
    if (t < nthreads) {
      for (std::size_t i = 0; i < prefixes[t].size() && !stop; ++i) {
        choice[t] = i;
        pick(t + 1);
      }
      return;
    }
    std::vector<std::vector<Label>> labels;
    ProgramState ps;
    for (ThreadId u = 0; u < nthreads; ++u) {
      labels.push_back(prefixes[u][choice[u]].labels);
      ps.threads.push_back(prefixes[u][choice[u]].state);
    }
    std::size_t total = init.size();
    for (const auto &l : labels)
      total += l.size();
    if (total > Relation::kMaxEvents)
      throw std::length_error("execution graphs support at most 64 events");
    ExecutionGraph g = make_graph(init, labels);
    std::vector<std::size_t> readers;
    std::vector<std::vector<int>> sources;
    for (std::size_t r = 0; r < g.size(); ++r) {
      const Label &l = g.events[r].lab;
      if (!is_read_like(l))
        continue;
      std::vector<int> cands;
      for (std::size_t w = 0; w < g.size(); ++w) {
        const Label &lw = g.events[w].lab;
        if (w != r && is_write_like(lw) && lw.loc() == l.loc() && lw.val_w() == l.val_r())
          cands.push_back(static_cast<int>(w));
      }
      if (cands.empty())
        return;
      readers.push_back(r);
      sources.push_back(std::move(cands));
    }
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (stop)
        return;
      if (i == readers.size()) {
        if (!visit(g, ps))
          stop = true;
        return;
      }
      for (int w : sources[i]) {
        g.rf[readers[i]] = w;
        assign(i + 1);
        if (stop)
          return;
      }
      g.rf[readers[i]] = -1;
    };
    assign(0);
  };
  pick(0);
}

template <class F> bool for_each_assignment(ExecutionGraph &g, F &&f) {
  std::vector<std::vector<int>> cands(g.num_locations());
  for (std::size_t e = 0; e < g.size(); ++e)
    if (is_write_like(g.events[e].lab))
      cands[g.events[e].lab.loc()].push_back(static_cast<int>(e));
  std::function<bool(std::size_t)> rec = [&](std::size_t x) -> bool {
    if (x == cands.size())
      return f(g);
    for (int e : cands[x]) {
      g.mem_assign[x] = e;
      if (!rec(x + 1))
        return false;
    }
    return true;
  };
  return rec(0);
}

} // namespace

void generate_graphs(const Program &prog, const Memory &init, std::span<const Value> universe,
                     const std::function<bool(const ExecutionGraph &, const ProgramState &)> &visit) {
  generate_skeletons(prog, init, universe, [&](ExecutionGraph &g, const ProgramState &ps) {
    return for_each_assignment(g, [&](const ExecutionGraph &full) { return visit(full, ps); });
  });
}

DecReachability dec_reachable(const LitmusTest &test, DecModel m, unsigned max_chain, std::size_t graph_limit) {
  if (max_chain == 0)
    throw std::invalid_argument("chains need at least one graph");
  DecReachability out;
  std::set<Memory> seen{test.init};
  std::vector<Memory> frontier{test.init};
  for (unsigned level = 0; level < max_chain && !frontier.empty(); ++level) {
    std::vector<Memory> next;
    for (const Memory &m0 : frontier) {
      generate_graphs(test.program, m0, test.universe, [&](const ExecutionGraph &g, const ProgramState &ps) {
        if (++out.graphs > graph_limit)
          throw LimitExceeded("graph count", graph_limit);
        if (!consistent(g, m))
          return true;
        ++out.consistent_graphs;
        Memory mg = mem_of(g);
        out.program_states.insert(ps);
        if (all_terminated(ps, test.program))
          out.final_states.insert(registers_of(ps));
        out.nv_memories.insert(mg);
        out.observations.emplace(ps, mg);
        if (seen.insert(mg).second)
          next.push_back(mg);
        return true;
      });
    }
    frontier = std::move(next);
  }
  return out;
}

ReachabilitySummary dec_summary(const LitmusTest &test, DecModel m, unsigned max_chain, std::size_t graph_limit) {
  DecReachability r = dec_reachable(test, m, max_chain, graph_limit);
  ReachabilitySummary sum;
  sum.test = test.name;
  sum.model = dec_model_name(m);
  for (const auto &c : test.checks) {
    if (!c.applies_to(sum.model))
      continue;
    bool hit = std::any_of(r.observations.begin(), r.observations.end(), [&](const auto &o) {
      return satisfies(c, test.program, o.first, o.second);
    });
    sum.checks.push_back(
        {c.kind, format_condition(c, test.program), (c.kind == CheckKind::Allowed) == hit, std::nullopt});
  }
  sum.stats.visited = r.graphs;
  sum.stats.transitions = r.consistent_graphs;
  sum.final_states = std::move(r.final_states);
  sum.nv_memories = std::move(r.nv_memories);
  return sum;
}

bool trace_in_graph(std::span<const TraceEntry> tr, const ExecutionGraph &g) {
  std::map<ThreadId, std::vector<Label>> expected;
  std::size_t count = 0;
  for (const auto &e : g.events)
    if (!e.is_init()) {
      auto &v = expected[*e.tid];
      if (v.size() < e.sn)
        v.resize(e.sn);
      v[e.sn - 1] = e.lab;
      ++count;
    }
  if (tr.size() != count)
    return false;
  std::map<ThreadId, std::size_t> pos;
  for (const auto &te : tr) {
    if (te.crash)
      return false;
    auto it = expected.find(te.tid);
    if (it == expected.end())
      return false;
    std::size_t &i = pos[te.tid];
    if (i >= it->second.size() || it->second[i] != te.lab)
      return false;
    ++i;
  }
  return true;
}

} // namespace ptsokit
