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

#ifndef PTSOKIT_CORE_LITMUS_HPP
#define PTSOKIT_CORE_LITMUS_HPP

#include "ptsokit/core/labels.hpp"

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ptsokit {

using RegId = std::uint16_t;
using Pc = std::uint32_t;

/// Expressions over registers and constants. Comparisons yield 1 or 0.
struct Expr {
  enum class Op : std::uint8_t { Const, Reg, Add, Eq, Ne };

  Op op = Op::Const;
  Value value = 0;
  RegId reg = 0;
  std::vector<Expr> args;

  static Expr constant(Value v) { return {Op::Const, v, 0, {}}; }
  static Expr regref(RegId r) { return {Op::Reg, 0, r, {}}; }
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Value eval(std::span<const Value> regs) const;
  void collect_regs(std::vector<RegId> &out) const;

  friend bool operator==(const Expr &, const Expr &) = default;
};

enum class Op : std::uint8_t {
  Assign,  // reg := e1
  IfGoto,  // if e1 != 0 goto target
  Write,   // loc := e1
  Read,    // reg := loc
  Fadd,    // reg := FADD(loc, e1)
  Cas,     // reg := CAS(loc, e1, e2)
  Mfence,
  Flush,
  FlushOpt,
  Sfence,
};

struct Instruction {
  Op op = Op::Mfence;
  RegId reg = 0;
  LocId loc = 0;
  Expr e1;
  Expr e2;
  Pc target = 0;

  static Instruction assign(RegId r, Expr e) { return {Op::Assign, r, 0, std::move(e), {}, 0}; }
  static Instruction if_goto(Expr e, Pc t) { return {Op::IfGoto, 0, 0, std::move(e), {}, t}; }
  static Instruction write(LocId x, Expr e) { return {Op::Write, 0, x, std::move(e), {}, 0}; }
  static Instruction read(RegId r, LocId x) { return {Op::Read, r, x, {}, {}, 0}; }
  static Instruction fadd(RegId r, LocId x, Expr e) { return {Op::Fadd, r, x, std::move(e), {}, 0}; }
  static Instruction cas(RegId r, LocId x, Expr er, Expr ew) {
    return {Op::Cas, r, x, std::move(er), std::move(ew), 0};
  }
  static Instruction mfence() { return {Op::Mfence, 0, 0, {}, {}, 0}; }
  static Instruction flush(LocId x) { return {Op::Flush, 0, x, {}, {}, 0}; }
  static Instruction flush_opt(LocId x) { return {Op::FlushOpt, 0, x, {}, {}, 0}; }
  static Instruction sfence() { return {Op::Sfence, 0, 0, {}, {}, 0}; }

  friend bool operator==(const Instruction &, const Instruction &) = default;
};

/// Code for one thread; pc `code.size()` is the terminated state.
struct SequentialProgram {
  std::string name;
  std::vector<std::string> regs;
  std::vector<Instruction> code;

  friend bool operator==(const SequentialProgram &, const SequentialProgram &) = default;
};

struct Program {
  std::vector<SequentialProgram> threads;
  std::vector<std::string> locations;

  std::size_t num_threads() const { return threads.size(); }
  std::size_t num_locations() const { return locations.size(); }
  Symbols symbols() const;

  friend bool operator==(const Program &, const Program &) = default;
};

struct ThreadState {
  Pc pc = 0;
  std::vector<Value> regs;

  friend auto operator<=>(const ThreadState &, const ThreadState &) = default;
};

struct ProgramState {
  std::vector<ThreadState> threads;

  friend auto operator<=>(const ProgramState &, const ProgramState &) = default;
};

ProgramState initial_state(const Program &prog);
bool terminated(const ProgramState &ps, const Program &prog, ThreadId tid);
bool all_terminated(const ProgramState &ps, const Program &prog);

/// Register contents of every thread; the observable part of a final state.
using RegisterState = std::vector<std::vector<Value>>;
RegisterState registers_of(const ProgramState &ps);

/// A condition term: nv(loc) (=|!=) value, or thread:reg (=|!=) value.
struct Term {
  bool is_nv = true;
  LocId loc = 0;
  ThreadId tid = 0;
  RegId reg = 0;
  bool negated = false;
  Value value = 0;

  friend bool operator==(const Term &, const Term &) = default;
};

enum class CheckKind : std::uint8_t { Allowed, Forbidden };

struct Check {
  CheckKind kind = CheckKind::Allowed;
  std::vector<Term> terms;
  // Models this check is restricted to; empty means every model.
  std::vector<std::string> models;

  bool applies_to(std::string_view model) const;

  friend bool operator==(const Check &, const Check &) = default;
};

/// Evaluates the nv terms against `mem` and the register terms against
/// `ps`; a register term only holds once its thread has terminated.
bool satisfies(const Check &c, const Program &prog, const ProgramState &ps, const Memory &mem);

std::string format_condition(const Check &c, const Program &prog);

struct Budget {
  unsigned max_crashes = 1;
  unsigned unroll = 0;

  friend bool operator==(const Budget &, const Budget &) = default;
};

struct LitmusTest {
  std::string name;
  Program program;
  Memory init;
  std::vector<Check> checks;
  Budget budget;
  // Finite set of values the program can ever observe, sorted.
  std::vector<Value> universe;
};

class ParseError : public std::runtime_error {
public:
  /// what() is "[source:]line:col: msg".
  ParseError(const std::string &msg, std::size_t line, std::size_t col, const std::string &source = {});
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }
  const std::string &message() const { return msg_; }

private:
  std::string msg_;
  std::size_t line_;
  std::size_t col_;
};

struct ParseOverrides {
  std::optional<unsigned> crashes;
  std::optional<unsigned> unroll;
};

LitmusTest parse_litmus(std::string_view text, const ParseOverrides &overrides = {});
LitmusTest load_litmus(const std::string &path, const ParseOverrides &overrides = {});

/// Prints a test back in litmus syntax. Code is emitted in its flat
/// (desugared) form with numeric labels.
std::string print_litmus(const LitmusTest &test);

/// Replaces each back-edge by `times` copies of the loop body, after which
/// the back-edge terminates the thread. Throws std::invalid_argument if the
/// code has a back-edge and `times` is zero.
SequentialProgram unroll_loops(const SequentialProgram &sp, unsigned times);
bool is_acyclic(const SequentialProgram &sp);

/// Over-approximates every value a run with at most `max_crashes` crashes
/// can read or write.
std::vector<Value> value_universe(const Program &prog, const Memory &init, unsigned max_crashes);

/// Recomputes the universe after the program or budget changed.
void refresh_universe(LitmusTest &test);

/// One transition of the program LTS.
struct ProgramStep {
  TransitionLabel label;
  ProgramState next;
};

/// All transitions enabled at `ps`. Reads are enumerated over `universe`.
std::vector<ProgramStep> program_successors(const ProgramState &ps, const Program &prog,
                                            std::span<const Value> universe);

/// Transitions of a single thread.
void thread_successors(const ProgramState &ps, const Program &prog, ThreadId tid,
                       std::span<const Value> universe, std::vector<ProgramStep> &out);

/// Labels thread `tid` can emit next, after closing under its own silent
/// steps. Sorted and duplicate free.
std::vector<Label> enabled_labels(const ProgramState &ps, const Program &prog, ThreadId tid,
                                  std::span<const Value> universe);

} // namespace ptsokit

#endif
