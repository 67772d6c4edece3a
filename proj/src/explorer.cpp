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

#include "ptsokit/core/explorer.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace ptsokit {

const char *model_name(Model m) {
  switch (m) {
  case Model::Ptso: return "ptso";
  case Model::PtsoSyn: return "ptsosyn";
  case Model::Psc: return "psc";
  case Model::Pscf: return "pscf";
  }
  return "?";
}

std::optional<Model> parse_model(std::string_view name) {
  for (Model m : {Model::Ptso, Model::PtsoSyn, Model::Psc, Model::Pscf})
    if (name == model_name(m))
      return m;
  return std::nullopt;
}

bool ReachabilitySummary::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.pass; });
}

PtsoState crash_step(const PtsoState &s) { return PtsoState::initial(s.mem, s.sb.size()); }
PtsoSynState crash_step(const PtsoSynState &s) { return PtsoSynState::initial(s.mem, s.sb.size()); }
PscState crash_step(const PscState &s) { return PscState::initial(s.mem, 0); }
PscfState crash_step(const PscfState &s) { return PscfState::initial(s.mem, s.csf.size()); }

ProgramState close_silent(ProgramState ps, const Program &prog) {
  for (ThreadId t = 0; t < prog.num_threads(); ++t) {
    ThreadState &ts = ps.threads[t];
    const auto &code = prog.threads[t].code;
    while (ts.pc < code.size()) {
      const Instruction &ins = code[ts.pc];
      if (ins.op == Op::Assign) {
        ts.regs[ins.reg] = ins.e1.eval(ts.regs);
        ++ts.pc;
      } else if (ins.op == Op::IfGoto) {
        Pc next = ins.e1.eval(ts.regs) != 0 ? ins.target : ts.pc + 1;
        if (next <= ts.pc)
          throw std::invalid_argument("exploration needs acyclic code");
        ts.pc = next;
      } else {
        break;
      }
    }
  }
  return ps;
}

namespace {

void encode_program_state(std::string &out, const ProgramState &ps) {
  for (const auto &t : ps.threads) {
    encoding::put(out, t.pc);
    for (Value v : t.regs)
      encoding::put(out, v);
  }
}

template <class S> struct Node {
  ProgramState ps;
  S m;
  unsigned crashes = 0;
  std::size_t parent = 0;
  std::optional<TraceEntry> entry;
};

template <class S, class Succ>
ReachabilitySummary run(const LitmusTest &test, Model model, const ExploreOptions &opts, Succ &&succ) {
  const Program &prog = test.program;
  const std::size_t nthreads = prog.num_threads();
  ReachabilitySummary sum;
  sum.test = test.name;
  sum.model = model_name(model);

  std::vector<const Check *> checks;
  for (const auto &c : test.checks)
    if (c.applies_to(sum.model))
      checks.push_back(&c);
  std::vector<std::optional<std::size_t>> hit(checks.size());

  std::vector<Node<S>> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::size_t> work;
  std::string key;

  auto add = [&](ProgramState ps, S m, unsigned crashes, std::size_t parent, std::optional<TraceEntry> entry) {
    ++sum.stats.transitions;
    key.clear();
    encode_program_state(key, ps);
    m.encode(key);
    encoding::put(key, crashes);
    auto [it, inserted] = seen.try_emplace(key, nodes.size());
    if (!inserted)
      return;
    if (nodes.size() >= opts.state_limit)
      throw LimitExceeded("state count", opts.state_limit);
    nodes.push_back({std::move(ps), std::move(m), crashes, parent, entry});
    work.push_back(nodes.size() - 1);
  };

  const ProgramState init_ps = close_silent(initial_state(prog), prog);
  add(init_ps, S::initial(test.init, nthreads), 0, 0, std::nullopt);
  sum.stats.transitions = 0;

  std::vector<ProgramStep> psteps;
  std::vector<ThreadLabel> offer;
  std::vector<MachineStep<S>> msteps;
  while (!work.empty()) {
    std::size_t idx;
    if (opts.depth_first) {
      idx = work.back();
      work.pop_back();
    } else {
      idx = work.front();
      work.pop_front();
    }
    const ProgramState ps = nodes[idx].ps;
    const S m = nodes[idx].m;
    const unsigned crashes = nodes[idx].crashes;

    sum.nv_memories.insert(m.mem);
    if (all_terminated(ps, prog))
      sum.final_states.insert(registers_of(ps));
    if (opts.record_program_states)
      sum.program_states.insert(ps);
    if (opts.record_observations)
      sum.observations.emplace(ps, m.mem);
    for (std::size_t c = 0; c < checks.size(); ++c)
      if (!hit[c] && satisfies(*checks[c], prog, ps, m.mem))
        hit[c] = idx;

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
    succ(m, std::span<const ThreadLabel>(offer), msteps);
    for (auto &ms : msteps) {
      if (!ms.label) {
        add(ps, std::move(ms.next), crashes, idx, std::nullopt);
        continue;
      }
      const TransitionLabel &want = ms.label;
      auto lo = std::partition_point(psteps.begin(), psteps.end(),
                                     [&](const ProgramStep &p) { return p.label < want; });
      auto hi = std::partition_point(lo, psteps.end(), [&](const ProgramStep &p) { return p.label == want; });
      for (auto it = lo; it != hi; ++it)
        add(close_silent(it->next, prog), ms.next, crashes, idx,
            TraceEntry::event(ms.label->tid, ms.label->lab));
    }
    if (crashes < test.budget.max_crashes)
      add(init_ps, crash_step(m), crashes + 1, idx, TraceEntry::crash_marker());
  }
  sum.stats.visited = nodes.size();

  auto trace_to = [&](std::size_t idx) {
    ObservableTrace tr;
    while (idx != 0) {
      if (nodes[idx].entry)
        tr.push_back(*nodes[idx].entry);
      idx = nodes[idx].parent;
    }
    std::reverse(tr.begin(), tr.end());
    return tr;
  };
  for (std::size_t c = 0; c < checks.size(); ++c) {
    CheckResult r;
    r.kind = checks[c]->kind;
    r.condition = format_condition(*checks[c], prog);
    r.pass = (r.kind == CheckKind::Allowed) == hit[c].has_value();
    if (hit[c] && opts.record_witnesses)
      r.witness = trace_to(*hit[c]);
    sum.checks.push_back(std::move(r));
  }
  return sum;
}

template <class A, class B> std::optional<A> least_difference(const std::set<A> &x, const std::set<B> &y) {
  std::optional<A> best;
  for (const auto &e : x)
    if (!y.count(e)) {
      best = e;
      break;
    }
  return best;
}

} // namespace

ReachabilitySummary explore(const LitmusTest &test, Model model, const ExploreOptions &opts) {
  switch (model) {
  case Model::Ptso:
    return run<PtsoState>(test, model, opts, [](const auto &s, auto en, auto &out) { ptso_successors(s, en, out); });
  case Model::PtsoSyn:
    return run<PtsoSynState>(test, model, opts,
                             [](const auto &s, auto en, auto &out) { ptsosyn_successors(s, en, out); });
  case Model::Psc:
    return run<PscState>(test, model, opts, [](const auto &s, auto en, auto &out) { psc_successors(s, en, out); });
  case Model::Pscf:
    return run<PscfState>(test, model, opts, [](const auto &s, auto en, auto &out) { pscf_successors(s, en, out); });
  }
  throw std::invalid_argument("unknown model");
}

std::vector<bool> verdict(const LitmusTest &test, Model model, const ExploreOptions &opts) {
  ExploreOptions o = opts;
  o.record_witnesses = false;
  std::vector<bool> out;
  for (const auto &c : explore(test, model, o).checks)
    out.push_back(c.pass);
  return out;
}

Comparison compare_summaries(const ReachabilitySummary &a, const ReachabilitySummary &b) {
  Comparison c;
  auto fa = least_difference(a.final_states, b.final_states);
  auto fb = least_difference(b.final_states, a.final_states);
  if (fa || fb) {
    c.equal = false;
    c.kind = Comparison::Kind::FinalState;
    c.side = !fa || (fb && *fb < *fa) ? 1 : 0;
    c.final_state = c.side ? *fb : *fa;
    return c;
  }
  auto ma = least_difference(a.nv_memories, b.nv_memories);
  auto mb = least_difference(b.nv_memories, a.nv_memories);
  if (ma || mb) {
    c.equal = false;
    c.kind = Comparison::Kind::NvMemory;
    c.side = !ma || (mb && *mb < *ma) ? 1 : 0;
    c.nv_memory = c.side ? *mb : *ma;
  }
  return c;
}

Comparison compare_models(const LitmusTest &test, Model a, Model b, const ExploreOptions &opts) {
  ExploreOptions o = opts;
  o.record_witnesses = false;
  return compare_summaries(explore(test, a, o), explore(test, b, o));
}

} // namespace ptsokit
