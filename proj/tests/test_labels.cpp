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

#include "ptsokit/core/labels.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>

using namespace ptsokit;

namespace {

TraceEntry ev(ThreadId t, Label l) { return TraceEntry::event(t, l); }

ObservableTrace random_trace(std::mt19937_64 &rng, std::size_t max_len) {
  std::uniform_int_distribution<int> tid(0, 2), kind(0, 3), val(0, 2), len(0, static_cast<int>(max_len));
  ObservableTrace tr;
  for (int i = len(rng); i > 0; --i) {
    const LocId x = static_cast<LocId>(val(rng));
    Label l;
    switch (kind(rng)) {
    case 0: l = Label::write(x, static_cast<Value>(val(rng))); break;
    case 1: l = Label::read(x, static_cast<Value>(val(rng))); break;
    case 2: l = Label::flush_opt(x); break;
    default: l = Label::sfence(); break;
    }
    tr.push_back(ev(static_cast<ThreadId>(tid(rng)), l));
  }
  return tr;
}

} // namespace

TEST_SUITE("model-core") {
  TEST_CASE("label attributes follow the kind") {
    const Label u = Label::rmw(2, 1, 3);
    CHECK(u.is(Kind::U));
    CHECK(u.loc() == 2);
    CHECK(u.val_r() == 1);
    CHECK(u.val_w() == 3);
    CHECK(!Label::mfence().has_loc());
    CHECK(!Label::sfence().has_loc());
    CHECK(Label::read_ex(0, 1).has_val_r());
    CHECK(!Label::read_ex(0, 1).has_val_w());
    CHECK(Label::write(0, 4).val_r() == 0);
    CHECK(to_string(Label::write(0, 1)) == "W(l0,1)");
    Symbols names{{"t1"}, {"x"}, {}};
    CHECK(to_string(Label::rmw(0, 0, 1), &names) == "U(x,0,1)");
    CHECK(to_string(TraceEntry::crash_marker()) == "crash");
  }

  TEST_CASE("restrict_trace") {
    const ObservableTrace tr{ev(0, Label::write(0, 1)), ev(1, Label::read(0, 1)), ev(0, Label::sfence())};
    CHECK(restrict_trace(tr, 0) == std::vector<Label>{Label::write(0, 1), Label::sfence()});
    CHECK(restrict_trace(ObservableTrace{}, 0).empty());
    CHECK(restrict_trace(ObservableTrace{ev(1, Label::read(0, 0))}, 0).empty());
    const ObservableTrace crashy{ev(0, Label::write(0, 1)), TraceEntry::crash_marker(), ev(0, Label::mfence())};
    CHECK(restrict_trace(crashy, 0) == std::vector<Label>{Label::write(0, 1), Label::mfence()});
  }

  TEST_CASE("per_thread_prefix") {
    const ObservableTrace a{ev(0, Label::write(0, 1))};
    const ObservableTrace b{ev(1, Label::read(1, 0)), ev(0, Label::write(0, 1)), ev(0, Label::sfence())};
    CHECK(per_thread_prefix(a, b));
    CHECK(per_thread_prefix(b, b));
    CHECK_FALSE(per_thread_prefix(ObservableTrace{ev(0, Label::sfence()), ev(0, Label::write(0, 1))},
                                  ObservableTrace{ev(0, Label::write(0, 1)), ev(0, Label::sfence())}));
    CHECK_FALSE(per_thread_prefix(b, a));
  }

  TEST_CASE("per_thread_prefix is reflexive and transitive; restrictions partition the trace") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
      const ObservableTrace c = random_trace(rng, 8);
      REQUIRE(per_thread_prefix(c, c));
      // b and a are per-thread prefixes built by cutting each thread.
      std::uniform_int_distribution<int> keep(0, 1);
      ObservableTrace b, a;
      std::vector<bool> cut_b(3, false), cut_a(3, false);
      for (const auto &e : c) {
        cut_b[e.tid] = cut_b[e.tid] || keep(rng) == 0;
        if (!cut_b[e.tid]) {
          b.push_back(e);
          cut_a[e.tid] = cut_a[e.tid] || keep(rng) == 0;
          if (!cut_a[e.tid])
            a.push_back(e);
        }
      }
      REQUIRE(per_thread_prefix(a, b));
      REQUIRE(per_thread_prefix(b, c));
      REQUIRE(per_thread_prefix(a, c));

      std::vector<Label> all, joined;
      for (const auto &e : c)
        all.push_back(e.lab);
      for (ThreadId t = 0; t < 3; ++t)
        for (const auto &l : restrict_trace(c, t))
          joined.push_back(l);
      std::sort(all.begin(), all.end());
      std::sort(joined.begin(), joined.end());
      REQUIRE(all == joined);
    }
  }
}
