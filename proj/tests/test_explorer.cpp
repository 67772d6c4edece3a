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

#include "doctest.h"
#include "support.hpp"

#include <algorithm>

using namespace ptsokit;

namespace {

constexpr Model kModels[] = {Model::Ptso, Model::PtsoSyn, Model::Psc, Model::Pscf};

LitmusTest corpus_test(const std::string &name) { return load_litmus(testing::corpus_dir() + "/" + name + ".litmus"); }

LitmusTest with_check(LitmusTest t, CheckKind kind) {
  for (auto &c : t.checks)
    c.kind = kind;
  return t;
}

} // namespace

TEST_SUITE("explorer") {
  TEST_CASE("model names") {
    for (Model m : kModels)
      CHECK(parse_model(model_name(m)) == m);
    CHECK_FALSE(parse_model("tso"));
  }

  TEST_CASE("crash_step") {
    PtsoSynState s = PtsoSynState::initial({1, 2}, 2);
    s.sb[0] = {Label::write(0, 5)};
    s.pbs[1] = {PlEntry::value(3), PlEntry::marker(1)};
    const auto c = crash_step(s);
    CHECK(c == PtsoSynState::initial({1, 2}, 2));
    PtsoState p = PtsoState::initial({7}, 1);
    p.pb = {PbEntry::persist(0)};
    p.sb[0] = {Label::sfence()};
    CHECK(crash_step(p) == PtsoState::initial({7}, 1));
    PscState q = PscState::initial({4}, 1);
    q.pbs[0] = {PlEntry::value(1)};
    CHECK(crash_step(q) == PscState::initial({4}, 1));

    // Crashes are bounded by the budget.
    auto t = corpus_test("sec3-a");
    t.budget.max_crashes = 0;
    refresh_universe(t);
    const auto none = explore(t, Model::PtsoSyn);
    t.budget.max_crashes = 1;
    refresh_universe(t);
    const auto one = explore(t, Model::PtsoSyn);
    CHECK(one.stats.visited > none.stats.visited);
  }

  TEST_CASE("example programs A to D") {
    const auto a = corpus_test("sec3-a");
    CHECK(explore(a, Model::Ptso).checks[0].pass);
    const auto b = corpus_test("sec3-b");
    CHECK(verdict(b, Model::Ptso) == std::vector<bool>{true});
    CHECK(verdict(with_check(b, CheckKind::Allowed), Model::Ptso) == std::vector<bool>{false});
    const auto c = corpus_test("sec3-c");
    CHECK(verdict(c, Model::Ptso) == std::vector<bool>{true});
    const auto d = corpus_test("sec3-d");
    CHECK(verdict(d, Model::PtsoSyn) == std::vector<bool>{true});
    for (Model m : kModels)
      for (const char *n : {"sec3-a", "sec3-b", "sec3-c", "sec3-d"})
        CHECK(explore(corpus_test(n), m).all_pass());
  }

  TEST_CASE("fo-ooo and fot verdicts") {
    const auto fo = corpus_test("fo-ooo");
    CHECK(verdict(fo, Model::Ptso) == std::vector<bool>{true});
    CHECK(verdict(fo, Model::PtsoSyn) == std::vector<bool>{true});
    CHECK(verdict(with_check(fo, CheckKind::Allowed), Model::Psc) == std::vector<bool>{false});
    const auto s = explore(fo, Model::PtsoSyn);
    REQUIRE(s.checks[0].witness);
    CHECK_FALSE(s.checks[0].witness->empty());
    const auto fot = corpus_test("fot");
    CHECK(verdict(fot, Model::PtsoSyn) == std::vector<bool>{true});
  }

  TEST_CASE("witness traces replay to the condition") {
    const auto t = corpus_test("fot");
    const auto s = explore(t, Model::Ptso);
    REQUIRE(s.checks[0].witness);
    const auto &w = *s.checks[0].witness;
    const auto t2 = restrict_trace(w, 1);
    REQUIRE(!t2.empty());
    CHECK(t2.front() == Label::read(1, 1));
    ExploreOptions o;
    o.record_witnesses = false;
    CHECK_FALSE(explore(t, Model::Ptso, o).checks[0].witness);
  }

  TEST_CASE("compare_models") {
    for (const auto &t : testing::corpus()) {
      CAPTURE(t.name);
      CHECK(compare_models(t, Model::Ptso, Model::PtsoSyn).equal);
      CHECK(compare_models(t, Model::Psc, Model::Pscf).equal);
    }
    const auto c = compare_models(corpus_test("fo-race"), Model::PtsoSyn, Model::Psc);
    CHECK_FALSE(c.equal);
    CHECK(c.kind == Comparison::Kind::NvMemory);
    CHECK(c.side == 0);
    CHECK(c.nv_memory == Memory{0, 0, 1, 1});
    const auto sb = compare_models(corpus_test("sb"), Model::Psc, Model::Ptso);
    CHECK(sb.kind == Comparison::Kind::FinalState);
    CHECK(sb.side == 1);
    CHECK(sb.final_state == RegisterState{{0}, {0}});
  }

  TEST_CASE("state limit") {
    ExploreOptions o;
    o.state_limit = 3;
    CHECK_THROWS_AS(explore(corpus_test("fo-ooo"), Model::Ptso, o), LimitExceeded);
    try {
      explore(corpus_test("fo-ooo"), Model::Ptso, o);
    } catch (const LimitExceeded &e) {
      CHECK(e.limit() == 3);
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }

  TEST_CASE("BFS and DFS agree; runs are deterministic") {
    ExploreOptions bfs, dfs;
    bfs.record_program_states = dfs.record_program_states = true;
    bfs.record_observations = dfs.record_observations = true;
    bfs.record_witnesses = dfs.record_witnesses = false;
    dfs.depth_first = true;
    auto check = [&](const LitmusTest &t) {
      for (Model m : kModels) {
        const auto a = explore(t, m, bfs), b = explore(t, m, dfs);
        REQUIRE(a.final_states == b.final_states);
        REQUIRE(a.nv_memories == b.nv_memories);
        REQUIRE(a.program_states == b.program_states);
        REQUIRE(a.observations == b.observations);
        REQUIRE(a.stats.visited == b.stats.visited);
        REQUIRE(verdict(t, m) == verdict(t, m, dfs));
        REQUIRE(explore(t, m, bfs) == a);
      }
    };
    for (const auto &t : testing::corpus()) {
      CAPTURE(t.name);
      check(t);
    }
    testing::GenConfig small;
    small.max_threads = 2;
    small.max_instructions = 4;
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
      CAPTURE(seed);
      check(testing::random_test(seed, small));
    }
  }

  TEST_CASE("nv memories grow with the crash budget and touch only written locations") {
    testing::GenConfig small;
    small.max_threads = 2;
    small.max_instructions = 4;
    small.max_crashes = 0;
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
      CAPTURE(seed);
      auto t = testing::random_test(seed, small);
      std::vector<bool> written(t.program.num_locations(), false);
      for (const auto &sp : t.program.threads)
        for (const auto &i : sp.code)
          if (i.op == Op::Write || i.op == Op::Cas || i.op == Op::Fadd)
            written[i.loc] = true;
      for (Model m : kModels) {
        t.budget.max_crashes = 0;
        refresh_universe(t);
        const auto a = explore(t, m);
        t.budget.max_crashes = 1;
        refresh_universe(t);
        const auto b = explore(t, m);
        REQUIRE(std::includes(b.nv_memories.begin(), b.nv_memories.end(), a.nv_memories.begin(), a.nv_memories.end()));
        for (const auto &mem : b.nv_memories)
          for (LocId x = 0; x < mem.size(); ++x)
            if (!written[x])
              REQUIRE(mem[x] == t.init[x]);
      }
    }
  }
}
