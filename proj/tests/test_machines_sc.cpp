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
#include "ptsokit/core/machines_sc.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <set>

using namespace ptsokit;

namespace {

constexpr LocId x = 0, y = 1;

template <class S> std::vector<S> silent(const std::vector<MachineStep<S>> &steps) {
  std::vector<S> out;
  for (const auto &st : steps)
    if (!st.label)
      out.push_back(st.next);
  return out;
}

template <class S> std::vector<S> observable(const std::vector<MachineStep<S>> &steps, const ThreadLabel &tl) {
  std::vector<S> out;
  for (const auto &st : steps)
    if (st.label == TransitionLabel{tl})
      out.push_back(st.next);
  return out;
}

/// Every label over `nlocs` locations and `vals` a thread may offer.
std::vector<ThreadLabel> all_labels(std::size_t nthreads, std::size_t nlocs, Value vals) {
  std::vector<ThreadLabel> out;
  for (ThreadId t = 0; t < nthreads; ++t) {
    out.push_back({t, Label::mfence()});
    out.push_back({t, Label::sfence()});
    for (LocId l = 0; l < nlocs; ++l) {
      out.push_back({t, Label::flush(l)});
      out.push_back({t, Label::flush_opt(l)});
      for (Value v = 0; v < vals; ++v) {
        out.push_back({t, Label::write(l, v)});
        out.push_back({t, Label::read(l, v)});
        out.push_back({t, Label::read_ex(l, v)});
        for (Value w = 0; w < vals; ++w)
          out.push_back({t, Label::rmw(l, v, w)});
      }
    }
  }
  return out;
}

} // namespace

TEST_SUITE("machines-sc") {
  TEST_CASE("rdw_psc") {
    CHECK(rdw_psc({0}, {PlEntry::value(1)}, x) == 1);
    CHECK(rdw_psc({4}, {}, x) == 4);
    CHECK(rdw_psc({0}, {PlEntry::marker(0)}, x) == 0);
  }

  TEST_CASE("PSC forbids the fo-ooo outcome") {
    const auto t = load_litmus(testing::corpus_dir() + "/fo-ooo.litmus");
    const auto s = explore(t, Model::Psc);
    REQUIRE(s.checks.size() == 1);
    CHECK(s.checks[0].kind == CheckKind::Forbidden);
    CHECK(s.checks[0].pass);
    CHECK_FALSE(s.nv_memories.count(Memory{0, 3, 1}));
  }

  TEST_CASE("PSC flush waits for the location to persist") {
    PscState s = PscState::initial({0}, 1);
    const ThreadLabel w{0, Label::write(x, 1)}, fl{0, Label::flush(x)};
    const auto after = observable(psc_successors(s, std::span(&w, 1)), w);
    REQUIRE(after.size() == 1);
    CHECK(after[0].pbs[x] == LocBuffer{PlEntry::value(1)});
    CHECK(observable(psc_successors(after[0], std::span(&fl, 1)), fl).empty());
    const auto persisted = silent(psc_successors(after[0], {}));
    REQUIRE(persisted.size() == 1);
    CHECK(persisted[0].mem == Memory{1});
    CHECK(observable(psc_successors(persisted[0], std::span(&fl, 1)), fl).size() == 1);
  }

  TEST_CASE("PSC fences wait for their own markers only") {
    PscState s = PscState::initial({0, 0}, 2);
    s.pbs[y] = {PlEntry::marker(1)};
    const std::vector<ThreadLabel> offer{{0, Label::sfence()}, {1, Label::sfence()}, {1, Label::mfence()},
                                         {1, Label::rmw(x, 0, 1)}, {1, Label::read_ex(x, 0)}, {0, Label::rmw(x, 0, 1)}};
    std::set<ThreadLabel> seen;
    for (const auto &st : psc_successors(s, offer))
      if (st.label)
        seen.insert(*st.label);
    CHECK(seen == std::set<ThreadLabel>{{0, Label::sfence()}, {0, Label::rmw(x, 0, 1)}});
  }

  TEST_CASE("PSC appends in issue order") {
    PscState s = PscState::initial({0}, 2);
    const std::vector<ThreadLabel> seq{{0, Label::write(x, 1)}, {1, Label::write(x, 2)}, {1, Label::flush_opt(x)},
                                       {0, Label::rmw(x, 2, 3)}};
    for (const auto &tl : seq) {
      const auto n = observable(psc_successors(s, std::span(&tl, 1)), tl);
      REQUIRE(n.size() == 1);
      s = n[0];
    }
    CHECK(s.pbs[x] == LocBuffer{PlEntry::value(1), PlEntry::value(2), PlEntry::marker(1), PlEntry::value(3)});
  }

  TEST_CASE("PSCf") {
    const PscfState init = PscfState::initial({0, 0}, 2);
    CHECK(init.cp == std::vector<bool>{true, true});
    CHECK(init.csf == std::vector<bool>{true, true});
    CHECK(init.volatile_value(x) == 0);

    const ThreadLabel w{0, Label::write(x, 1)};
    const auto ws = observable(pscf_successors(init, std::span(&w, 1)), w);
    REQUIRE(ws.size() == 2);
    PscfState nopersist = init;
    nopersist.vmem[x] = 1;
    nopersist.cp[x] = false;
    PscfState persist = init;
    persist.vmem[x] = 1;
    persist.mem[x] = 1;
    CHECK(std::set<PscfState>(ws.begin(), ws.end()) == std::set<PscfState>{persist, nopersist});
    CHECK(nopersist.volatile_value(x) == 1);

    const ThreadLabel fl{1, Label::flush(x)};
    CHECK(pscf_successors(nopersist, std::span(&fl, 1)).empty());
    CHECK(pscf_successors(persist, std::span(&fl, 1)).size() == 1);

    const ThreadLabel fo{0, Label::flush_opt(y)}, sf{0, Label::sfence()};
    const auto fos = observable(pscf_successors(init, std::span(&fo, 1)), fo);
    REQUIRE(fos.size() == 2);
    for (const auto &n : fos)
      if (!n.csf[0])
        CHECK(pscf_successors(n, std::span(&sf, 1)).empty());

    // Crash keeps mem; the volatile view reads it back.
    const auto c = crash_step(persist);
    CHECK(c.mem == Memory{1, 0});
    CHECK(c.volatile_value(x) == 1);
    CHECK(c.cp == init.cp);
    CHECK(c.csf == init.csf);
  }

  TEST_CASE("PSCf is finite-state") {
    for (std::size_t nlocs = 1; nlocs <= 2; ++nlocs)
      for (std::size_t nthreads = 1; nthreads <= 2; ++nthreads) {
        const Value vals = 2;
        const auto offer = all_labels(nthreads, nlocs, vals);
        std::set<PscfState> seen;
        std::vector<PscfState> stack{PscfState::initial(Memory(nlocs, 0), nthreads)};
        while (!stack.empty()) {
          PscfState s = stack.back();
          stack.pop_back();
          if (!seen.insert(s).second)
            continue;
          for (auto &st : pscf_successors(s, offer))
            stack.push_back(st.next);
          stack.push_back(crash_step(s));
        }
        // vmem entries range over Val plus "unset".
        const double bound = std::pow(vals + 1.0, static_cast<double>(nlocs)) *
                             std::pow(static_cast<double>(vals), static_cast<double>(nlocs)) *
                             std::pow(2.0, static_cast<double>(nlocs + nthreads));
        CHECK(static_cast<double>(seen.size()) <= bound);
      }
  }

  TEST_CASE("PSC and PSCf agree on the corpus") {
    ExploreOptions o;
    o.record_observations = true;
    o.record_program_states = true;
    for (const auto &t : testing::corpus()) {
      CAPTURE(t.name);
      const auto a = explore(t, Model::Psc, o), b = explore(t, Model::Pscf, o);
      CHECK(a.observations == b.observations);
      CHECK(a.final_states == b.final_states);
      CHECK(a.nv_memories == b.nv_memories);
    }
  }

  TEST_CASE("PSC is sequentially consistent on SB and MP") {
    for (const char *name : {"sb", "mp"}) {
      const auto t = load_litmus(testing::corpus_dir() + "/" + name + ".litmus");
      const auto s = explore(t, Model::Psc);
      CHECK(s.all_pass());
      const RegisterState relaxed = std::string(name) == "sb" ? RegisterState{{0}, {0}} : RegisterState{{}, {1, 0}};
      CHECK_FALSE(s.final_states.count(relaxed));
    }
  }
}
