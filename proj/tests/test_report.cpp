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

#include "ptsokit/core/report.hpp"

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace ptsokit;
using nlohmann::ordered_json;

namespace {

LitmusTest corpus_test(const std::string &name) { return load_litmus(testing::corpus_dir() + "/" + name + ".litmus"); }

std::vector<std::string> keys(const ordered_json &j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out.push_back(it.key());
  return out;
}

} // namespace

TEST_SUITE("report") {
  TEST_CASE("summaries round-trip") {
    ExploreOptions o;
    o.record_program_states = true;
    o.record_observations = true;
    for (const auto &t : testing::corpus()) {
      CAPTURE(t.name);
      for (Model m : {Model::Ptso, Model::Pscf}) {
        const auto s = explore(t, m, o);
        CHECK(summary_from_json(summary_to_json(s)) == s);
        CHECK(summary_from_json(summary_to_json(s, -1)) == s);
      }
    }
    ReachabilitySummary crashy;
    crashy.test = "c";
    crashy.model = "psc";
    crashy.checks.push_back({CheckKind::Forbidden, "nv(x) = 1", false,
                             ObservableTrace{TraceEntry::event(1, Label::rmw(0, 1, 2)), TraceEntry::crash_marker(),
                                             TraceEntry::event(0, Label::read_ex(0, 3))}});
    CHECK(summary_from_json(summary_to_json(crashy)) == crashy);
  }

  TEST_CASE("key order is stable") {
    const auto s = explore(corpus_test("fot"), Model::Ptso);
    const auto j = ordered_json::parse(summary_to_json(s));
    CHECK(keys(j) == std::vector<std::string>{"test", "model", "checks", "stats", "final_states", "nv_memories"});
    CHECK(keys(j["checks"][0]) == std::vector<std::string>{"kind", "cond", "pass", "witness"});
    CHECK(keys(j["stats"]) == std::vector<std::string>{"visited", "transitions"});
    CHECK(j["checks"][0]["witness"][0] == ordered_json::parse(R"({"tid":0,"kind":"W","loc":0,"wval":1})"));
  }

  TEST_CASE("malformed summaries are rejected") {
    CHECK_THROWS_AS(summary_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(summary_from_json("[]"), std::invalid_argument);
    CHECK_THROWS_AS(summary_from_json(R"({"test":"a","model":"ptso"})"), std::invalid_argument);
    const auto good = ordered_json::parse(summary_to_json(explore(corpus_test("sec3-a"), Model::Psc)));
    auto bad = good;
    bad["checks"][0]["kind"] = "maybe";
    CHECK_THROWS_AS(summary_from_json(bad.dump()), std::invalid_argument);
    bad = good;
    bad["checks"][0]["witness"] = ordered_json::parse(R"([{"tid":0,"kind":"Q"}])");
    CHECK_THROWS_AS(summary_from_json(bad.dump()), std::invalid_argument);
    bad = good;
    bad["checks"][0]["witness"] = ordered_json::parse(R"(["boom"])");
    CHECK_THROWS_AS(summary_from_json(bad.dump()), std::invalid_argument);
  }

  TEST_CASE("comparison and race JSON") {
    const auto t = corpus_test("fo-race");
    const auto c = compare_models(t, Model::PtsoSyn, Model::Psc);
    const auto j = ordered_json::parse(comparison_to_json(c, t.name, "ptsosyn", "psc"));
    CHECK(j["equal"] == false);
    CHECK(j["witness"]["only_in"] == "ptsosyn");
    CHECK(j["witness"]["nv_memory"] == ordered_json::parse("[0,0,1,1]"));
    const auto names = t.program.symbols();
    CHECK(format_comparison(c, "ptsosyn", "psc", &names) == "only under ptsosyn: nv memory {x1=0, x2=0, x3=1, x4=1}\n");

    const auto r = is_racy(t);
    const auto jr = ordered_json::parse(race_to_json(r, t.name, false, &names));
    CHECK(jr["racy"] == true);
    CHECK(jr["race"]["label"]["kind"] == "FO");
    CHECK(ordered_json::parse(race_to_json(std::nullopt, "x", true))["racy"] == false);
    CHECK(format_race(std::nullopt, true) == "no strong race\n");
  }

  TEST_CASE("text formatting uses symbolic names") {
    const auto t = corpus_test("sb");
    const auto names = t.program.symbols();
    const auto s = explore(t, Model::Psc);
    const auto text = format_summary(s, &names);
    CHECK(text.rfind("sb under psc: ", 0) == 0);
    CHECK(text.find("PASS forbidden { t1:r1 = 0 /\\ t2:r2 = 0 }") != std::string::npos);
    CHECK(text.find("t1: r1=1 | t2: r2=1") != std::string::npos);
    CHECK(format_trace(ObservableTrace{}) == "(empty)");
    CHECK(format_trace(ObservableTrace{TraceEntry::event(0, Label::write(0, 1)), TraceEntry::crash_marker()}, &names) ==
          "t1: W(x,1); crash");
  }
}
