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

#include "ptsokit/core/litmus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ptsokit {

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Value Expr::eval(std::span<const Value> regs) const {
  switch (op) {
  case Op::Const: return value;
  case Op::Reg: return reg < regs.size() ? regs[reg] : 0;
  case Op::Add: return args[0].eval(regs) + args[1].eval(regs);
  case Op::Eq: return args[0].eval(regs) == args[1].eval(regs) ? 1 : 0;
  case Op::Ne: return args[0].eval(regs) != args[1].eval(regs) ? 1 : 0;
  }
  return 0;
}

void Expr::collect_regs(std::vector<RegId> &out) const {
  if (op == Op::Reg)
    out.push_back(reg);
  for (const auto &a : args)
    a.collect_regs(out);
}

Symbols Program::symbols() const {
  Symbols s;
  for (const auto &t : threads) {
    s.threads.push_back(t.name);
    s.registers.push_back(t.regs);
  }
  s.locations = locations;
  return s;
}

ProgramState initial_state(const Program &prog) {
  ProgramState ps;
  for (const auto &t : prog.threads)
    ps.threads.push_back(ThreadState{0, std::vector<Value>(t.regs.size(), 0)});
  return ps;
}

bool terminated(const ProgramState &ps, const Program &prog, ThreadId tid) {
  return ps.threads[tid].pc >= prog.threads[tid].code.size();
}

bool all_terminated(const ProgramState &ps, const Program &prog) {
  for (ThreadId t = 0; t < prog.num_threads(); ++t)
    if (!terminated(ps, prog, t))
      return false;
  return true;
}

RegisterState registers_of(const ProgramState &ps) {
  RegisterState out;
  for (const auto &t : ps.threads)
    out.push_back(t.regs);
  return out;
}

bool Check::applies_to(std::string_view model) const {
  return models.empty() || std::find(models.begin(), models.end(), model) != models.end();
}

bool satisfies(const Check &c, const Program &prog, const ProgramState &ps, const Memory &mem) {
  for (const auto &t : c.terms) {
    Value actual;
    if (t.is_nv) {
      actual = t.loc < mem.size() ? mem[t.loc] : 0;
    } else {
      if (!terminated(ps, prog, t.tid))
        return false;
      actual = ps.threads[t.tid].regs[t.reg];
    }
    if ((actual == t.value) == t.negated)
      return false;
  }
  return true;
}

std::string format_condition(const Check &c, const Program &prog) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    const Term &t = c.terms[i];
    if (i)
      os << " /\\ ";
    if (t.is_nv)
      os << "nv(" << prog.locations[t.loc] << ")";
    else
      os << prog.threads[t.tid].name << ':' << prog.threads[t.tid].regs[t.reg];
    os << (t.negated ? " != " : " = ") << t.value;
  }
  return os.str();
}

bool is_acyclic(const SequentialProgram &sp) {
  for (Pc pc = 0; pc < sp.code.size(); ++pc)
    if (sp.code[pc].op == Op::IfGoto && sp.code[pc].target <= pc)
      return false;
  return true;
}

SequentialProgram unroll_loops(const SequentialProgram &sp, unsigned times) {
  if (is_acyclic(sp))
    return sp;
  if (times == 0)
    throw std::invalid_argument("unbounded loop in thread '" + sp.name + "'");
  const Pc n = static_cast<Pc>(sp.code.size());
  const Pc stride = n + 1; // every copy but the last ends in a jump to the end
  const Pc end = stride * times + n;
  SequentialProgram out{sp.name, sp.regs, {}};
  out.code.reserve(end);
  for (unsigned copy = 0; copy <= times; ++copy) {
    const Pc base = stride * copy;
    for (Pc pc = 0; pc < n; ++pc) {
      Instruction ins = sp.code[pc];
      if (ins.op == Op::IfGoto) {
        if (ins.target >= n)
          ins.target = end;
        else if (ins.target > pc)
          ins.target = base + ins.target;
        else
          ins.target = copy < times ? base + stride + ins.target : end;
      }
      out.code.push_back(std::move(ins));
    }
    if (copy < times)
      out.code.push_back(Instruction::if_goto(Expr::constant(1), end));
  }
  return out;
}

namespace {

constexpr std::size_t kUniverseCap = 4096;

using ValueSet = std::set<Value>;

void check_cap(const ValueSet &s) {
  if (s.size() > kUniverseCap)
    throw std::length_error("value universe exceeds " + std::to_string(kUniverseCap) + " values");
}

ValueSet eval_set(const Expr &e, const std::vector<ValueSet> &regs) {
  switch (e.op) {
  case Expr::Op::Const: return {e.value};
  case Expr::Op::Reg: return regs[e.reg];
  default: break;
  }
  ValueSet a = eval_set(e.args[0], regs), b = eval_set(e.args[1], regs), out;
  for (Value x : a) {
    for (Value y : b) {
      if (e.op == Expr::Op::Add)
        out.insert(x + y);
      else
        out.insert((x == y) == (e.op == Expr::Op::Eq) ? 1u : 0u);
    }
    check_cap(out);
  }
  return out;
}

// One pass of a non-relational forward analysis over acyclic code. Reads
// may return anything in `universe`; every value written is added to
// `written`.
void analyse_thread(const SequentialProgram &sp, const ValueSet &universe, ValueSet &written) {
  const std::size_t n = sp.code.size();
  std::vector<std::optional<std::vector<ValueSet>>> in(n + 1);
  in[0] = std::vector<ValueSet>(sp.regs.size(), ValueSet{0});
  auto join = [&](std::size_t pc, const std::vector<ValueSet> &st) {
    if (pc > n)
      return;
    if (!in[pc]) {
      in[pc] = st;
      return;
    }
    for (std::size_t r = 0; r < st.size(); ++r)
      (*in[pc])[r].insert(st[r].begin(), st[r].end());
  };
  for (std::size_t pc = 0; pc < n; ++pc) {
    if (!in[pc])
      continue;
    std::vector<ValueSet> st = *in[pc];
    const Instruction &ins = sp.code[pc];
    switch (ins.op) {
    case Op::Assign:
      st[ins.reg] = eval_set(ins.e1, st);
      break;
    case Op::IfGoto: {
      ValueSet c = eval_set(ins.e1, st);
      if (c.count(0))
        join(pc + 1, st);
      if (c.size() > 1 || !c.count(0))
        join(ins.target, st);
      continue;
    }
    case Op::Write: {
      ValueSet v = eval_set(ins.e1, st);
      written.insert(v.begin(), v.end());
      break;
    }
    case Op::Read:
      st[ins.reg] = universe;
      break;
    case Op::Fadd: {
      ValueSet d = eval_set(ins.e1, st);
      for (Value u : universe)
        for (Value x : d)
          written.insert(u + x);
      check_cap(written);
      st[ins.reg] = universe;
      break;
    }
    case Op::Cas: {
      ValueSet v = eval_set(ins.e2, st);
      written.insert(v.begin(), v.end());
      st[ins.reg] = universe;
      break;
    }
    default:
      break;
    }
    join(pc + 1, st);
  }
}

} // namespace

std::vector<Value> value_universe(const Program &prog, const Memory &init, unsigned max_crashes) {
  ValueSet u{0};
  u.insert(init.begin(), init.end());
  std::size_t writers = 0;
  for (const auto &t : prog.threads) {
    if (!is_acyclic(t))
      throw std::invalid_argument("value universe needs acyclic code");
    for (const auto &ins : t.code)
      writers += ins.op == Op::Write || ins.op == Op::Fadd || ins.op == Op::Cas;
  }
  // Every value is produced by a chain of at most this many executed writes.
  const std::size_t rounds = (static_cast<std::size_t>(max_crashes) + 1) * writers + 1;
  for (std::size_t round = 0; round < rounds; ++round) {
    ValueSet written;
    for (const auto &t : prog.threads)
      analyse_thread(t, u, written);
    std::size_t before = u.size();
    u.insert(written.begin(), written.end());
    check_cap(u);
    if (u.size() == before)
      break;
  }
  return {u.begin(), u.end()};
}

void refresh_universe(LitmusTest &test) {
  test.universe = value_universe(test.program, test.init, test.budget.max_crashes);
}

void thread_successors(const ProgramState &ps, const Program &prog, ThreadId tid,
                       std::span<const Value> universe, std::vector<ProgramStep> &out) {
  const ThreadState &ts = ps.threads[tid];
  const auto &code = prog.threads[tid].code;
  if (ts.pc >= code.size())
    return;
  const Instruction &ins = code[ts.pc];
  auto step = [&](TransitionLabel lab, std::optional<std::pair<RegId, Value>> set, Pc next) {
    ProgramStep s{lab, ps};
    ThreadState &t = s.next.threads[tid];
    if (set)
      t.regs[set->first] = set->second;
    t.pc = next;
    out.push_back(std::move(s));
  };
  auto obs = [&](Label l) { return TransitionLabel{ThreadLabel{tid, l}}; };
  const Pc pc1 = ts.pc + 1;
  switch (ins.op) {
  case Op::Assign:
    step(std::nullopt, std::pair{ins.reg, ins.e1.eval(ts.regs)}, pc1);
    break;
  case Op::IfGoto:
    step(std::nullopt, std::nullopt, ins.e1.eval(ts.regs) != 0 ? ins.target : pc1);
    break;
  case Op::Write:
    step(obs(Label::write(ins.loc, ins.e1.eval(ts.regs))), std::nullopt, pc1);
    break;
  case Op::Read:
    for (Value v : universe)
      step(obs(Label::read(ins.loc, v)), std::pair{ins.reg, v}, pc1);
    break;
  case Op::Fadd: {
    Value d = ins.e1.eval(ts.regs);
    for (Value v : universe)
      step(obs(Label::rmw(ins.loc, v, v + d)), std::pair{ins.reg, v}, pc1);
    break;
  }
  case Op::Cas: {
    Value er = ins.e1.eval(ts.regs), ew = ins.e2.eval(ts.regs);
    step(obs(Label::rmw(ins.loc, er, ew)), std::pair{ins.reg, er}, pc1);
    for (Value v : universe)
      if (v != er)
        step(obs(Label::read_ex(ins.loc, v)), std::pair{ins.reg, v}, pc1);
    break;
  }
  case Op::Mfence: step(obs(Label::mfence()), std::nullopt, pc1); break;
  case Op::Flush: step(obs(Label::flush(ins.loc)), std::nullopt, pc1); break;
  case Op::FlushOpt: step(obs(Label::flush_opt(ins.loc)), std::nullopt, pc1); break;
  case Op::Sfence: step(obs(Label::sfence()), std::nullopt, pc1); break;
  }
}

std::vector<ProgramStep> program_successors(const ProgramState &ps, const Program &prog,
                                            std::span<const Value> universe) {
  std::vector<ProgramStep> out;
  for (ThreadId t = 0; t < prog.num_threads(); ++t)
    thread_successors(ps, prog, t, universe, out);
  return out;
}

std::vector<Label> enabled_labels(const ProgramState &ps, const Program &prog, ThreadId tid,
                                  std::span<const Value> universe) {
  ThreadState ts = ps.threads[tid];
  const auto &code = prog.threads[tid].code;
  // Silent steps are deterministic, so the closure is a single path; the
  // bound only matters for code that still contains loops.
  std::size_t fuel = code.size() * 64 + 64;
  while (ts.pc < code.size() && fuel-- > 0) {
    const Instruction &ins = code[ts.pc];
    if (ins.op == Op::Assign) {
      ts.regs[ins.reg] = ins.e1.eval(ts.regs);
      ++ts.pc;
    } else if (ins.op == Op::IfGoto) {
      ts.pc = ins.e1.eval(ts.regs) != 0 ? ins.target : ts.pc + 1;
    } else {
      break;
    }
  }
  std::vector<Label> out;
  if (ts.pc >= code.size() || fuel == static_cast<std::size_t>(-1))
    return out;
  ProgramState tmp = ps;
  tmp.threads[tid] = ts;
  std::vector<ProgramStep> steps;
  thread_successors(tmp, prog, tid, universe, steps);
  for (const auto &s : steps)
    if (s.label)
      out.push_back(s.label->lab);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace ptsokit
