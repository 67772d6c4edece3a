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

#include "doctest.h"
#include "support.hpp"

#include <algorithm>

using namespace ptsokit;

namespace {

constexpr LocId x = 0, y = 1;
const Value kBinary[] = {0, 1};

LitmusTest corpus_test(const std::string &name) { return load_litmus(testing::corpus_dir() + "/" + name + ".litmus"); }

std::vector<Op> ops(const SequentialProgram &sp) {
  std::vector<Op> out;
  for (const auto &i : sp.code)
    out.push_back(i.op);
  return out;
}

bool same_outcomes(const LitmusTest &a, Model ma, const LitmusTest &b, Model mb) {
  const auto sa = explore(a, ma), sb = explore(b, mb);
  return sa.final_states == sb.final_states && sa.nv_memories == sb.nv_memories;
}

} // namespace

TEST_SUITE("drf") {
  TEST_CASE("exhibits_race") {
    Program p{{SequentialProgram{"t1", {"r1"}, {Instruction::read(0, y)}},
               SequentialProgram{"t2", {}, {Instruction::write(y, Expr::constant(1))}}},
              {"x", "y"}};
    const auto ps = initial_state(p);
    const auto r = exhibits_race(ps, p, 0, Label::read(y, 0), kBinary);
    REQUIRE(r);
    CHECK(r->first == 1);
    CHECK(r->second == Label::write(y, 1));
    CHECK_FALSE(exhibits_race(ps, p, 0, Label::read(x, 0), kBinary));

    Program q{{SequentialProgram{"t1", {}, {Instruction::flush_opt(x)}},
               SequentialProgram{"t2", {"r1"}, {Instruction::cas(0, x, Expr::constant(0), Expr::constant(1))}}},
              {"x"}};
    const auto qs = initial_state(q);
    const auto rq = exhibits_race(qs, q, 0, Label::flush_opt(x), kBinary);
    REQUIRE(rq);
    CHECK(rq->second == Label::rmw(x, 0, 1));
    CHECK_FALSE(exhibits_race(qs, q, 1, Label::read_ex(x, 1), kBinary));
  }

  TEST_CASE("is_racy") {
    CHECK_FALSE(is_racy(corpus_test("mp-lock")));
    CHECK_FALSE(is_racy(corpus_test("sec3-d")));
    const auto fr = is_racy(corpus_test("fo-race"));
    REQUIRE(fr);
    CHECK(fr->lab.is(Kind::FO));
    CHECK(fr->lab_w.is(Kind::W));
    CHECK(fr->lab.loc() == fr->lab_w.loc());
    CHECK(fr->tid != fr->tid_w);
    CHECK_FALSE(fr->strong);
    REQUIRE(is_racy(corpus_test("mp")));
    CHECK(is_racy(corpus_test("mp"))->lab.is(Kind::R));
  }

  TEST_CASE("unprotected_after") {
    const std::vector<Label> w{Label::write(y, 1)}, wsf{Label::write(y, 1), Label::sfence()};
    CHECK(unprotected_after(Label::read(x, 0), w));
    CHECK_FALSE(unprotected_after(Label::flush_opt(x), wsf));
    CHECK(unprotected_after(Label::read(x, 0), wsf));
    CHECK_FALSE(unprotected_after(Label::read(x, 0), std::vector<Label>{Label::write(x, 1)}));
    CHECK_FALSE(unprotected_after(Label::read(x, 0), std::vector<Label>{Label::write(y, 1), Label::write(x, 2)}));
    CHECK_FALSE(unprotected_after(Label::read(x, 0), std::vector<Label>{Label::write(y, 1), Label::mfence()}));
    CHECK_FALSE(unprotected_after(Label::read(x, 0), std::vector<Label>{Label::write(y, 1), Label::read_ex(y, 0)}));
    CHECK(unprotected_after(Label::flush_opt(x), std::vector<Label>{Label::write(y, 1), Label::read(x, 0)}));
    CHECK_THROWS_AS(unprotected_after(Label::sfence(), w), std::invalid_argument);
  }

  TEST_CASE("max_crashless_suffix") {
    using E = TraceEntry;
    const ObservableTrace none{E::event(0, Label::write(x, 1)), E::event(1, Label::sfence())};
    CHECK(max_crashless_suffix(none, 0) == restrict_trace(none, 0));
    const ObservableTrace end{E::event(0, Label::write(x, 1)), E::crash_marker()};
    CHECK(max_crashless_suffix(end, 0).empty());
    const ObservableTrace mid{E::event(0, Label::write(x, 1)), E::crash_marker(), E::event(0, Label::sfence()),
                              E::event(1, Label::mfence())};
    CHECK(max_crashless_suffix(mid, 0) == std::vector<Label>{Label::sfence()});
  }

  TEST_CASE("is_strongly_racy") {
    CHECK(is_racy(corpus_test("fot")));
    CHECK_FALSE(is_strongly_racy(corpus_test("fot")));
    const auto fo = is_strongly_racy(corpus_test("fo-ooo"));
    REQUIRE(fo);
    CHECK(fo->strong);
    CHECK(unprotected_after(fo->lab, max_crashless_suffix(fo->witness_trace, fo->tid)));
    CHECK_FALSE(is_strongly_racy(corpus_test("fo-ooo-sfence")));
    CHECK_FALSE(is_strongly_racy(corpus_test("fo-ooo-fl")));
    CHECK_THROWS_AS(is_strongly_racy(corpus_test("fo-ooo"), 2), LimitExceeded);
  }

  TEST_CASE("g_unprotected") {
    const auto g = make_graph({0, 0}, {{Label::write(y, 1), Label::read(x, 0), Label::mfence(), Label::read(x, 0),
                                        Label::write(y, 1), Label::sfence(), Label::flush_opt(x)},
                                       {Label::read(y, 0)}});
    CHECK(g_unprotected(g, 3));
    CHECK_FALSE(g_unprotected(g, 5));
    CHECK_FALSE(g_unprotected(g, 8));
    CHECK_FALSE(g_unprotected(g, 9));
    const auto h = make_graph({0, 0}, {{Label::write(y, 1), Label::sfence(), Label::read(x, 0)}});
    CHECK(g_unprotected(h, 4));
  }

  TEST_CASE("insert_fences") {
    auto prog = [](std::vector<Instruction> code, std::size_t regs = 1) {
      SequentialProgram sp{"t", {}, std::move(code)};
      for (std::size_t r = 0; r < regs; ++r)
        sp.regs.push_back("r" + std::to_string(r + 1));
      return Program{{sp}, {"x", "y"}};
    };
    const auto a = insert_fences(prog({Instruction::write(y, Expr::constant(1)), Instruction::read(0, x)}));
    CHECK(ops(a.threads[0]) == std::vector<Op>{Op::Write, Op::Mfence, Op::Read});
    const auto b = prog({Instruction::write(x, Expr::constant(1)), Instruction::flush_opt(x)});
    CHECK(insert_fences(b) == b);
    const auto c = insert_fences(
        prog({Instruction::write(y, Expr::constant(1)), Instruction::read(0, x), Instruction::flush_opt(x)}));
    CHECK(ops(c.threads[0]) == std::vector<Op>{Op::Write, Op::Mfence, Op::Read, Op::FlushOpt});
    const auto d = insert_fences(prog({Instruction::write(y, Expr::constant(1)), Instruction::flush_opt(x)}));
    CHECK(ops(d.threads[0]) == std::vector<Op>{Op::Write, Op::Sfence, Op::FlushOpt});
    // A branch that skips the protecting write keeps the fence.
    const auto e = insert_fences(prog({Instruction::write(y, Expr::constant(1)), Instruction::read(0, y),
                                       Instruction::if_goto(Expr::regref(0), 4), Instruction::write(x, Expr::constant(2)),
                                       Instruction::read(0, x)}));
    CHECK(ops(e.threads[0]) == std::vector<Op>{Op::Write, Op::Read, Op::IfGoto, Op::Write, Op::Mfence, Op::Read});
    CHECK(e.threads[0].code[2].target == 4);
    SequentialProgram loop{"t", {}, {Instruction::if_goto(Expr::constant(1), 0)}};
    CHECK_THROWS_AS(insert_fences(Program{{loop}, {"x"}}), std::invalid_argument);
  }

  TEST_CASE("insert_fences is idempotent and removes strong races") {
    for (const auto &t : testing::corpus()) {
      CAPTURE(t.name);
      const auto m = insert_fences(t);
      CHECK(insert_fences(m.program) == m.program);
      CHECK_FALSE(is_strongly_racy(m));
    }
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
      const auto t = testing::random_test(seed);
      const auto once = insert_fences(t.program);
      REQUIRE(insert_fences(once) == once);
    }
  }

  TEST_CASE("programs without strong races behave the same under PTSOsyn and PSC") {
    for (const auto &t : testing::corpus()) {
      CAPTURE(t.name);
      const bool strong = is_strongly_racy(t).has_value();
      if (strong)
        CHECK(is_racy(t));
      else
        CHECK(same_outcomes(t, Model::PtsoSyn, t, Model::Psc));
      const auto m = insert_fences(t);
      CHECK(same_outcomes(m, Model::PtsoSyn, m, Model::Psc));
    }
  }

  TEST_CASE("the mapping can remove PSC outcomes") {
    const auto p = parse_litmus("litmus \"c\"\nthread t1 { x := 1; fo x; y := 1; r1 := z; w := 1; }\n"
                                "budget { crashes = 0; }\n");
    const auto m = insert_fences(p);
    const auto syn = explore(m, Model::PtsoSyn), psc = explore(p, Model::Psc);
    CHECK(std::includes(psc.nv_memories.begin(), psc.nv_memories.end(), syn.nv_memories.begin(), syn.nv_memories.end()));
    const Memory lost{0, 0, 0, 1};
    CHECK(psc.nv_memories.count(lost));
    CHECK_FALSE(syn.nv_memories.count(lost));
    CHECK(same_outcomes(m, Model::PtsoSyn, m, Model::Psc));
  }
}
