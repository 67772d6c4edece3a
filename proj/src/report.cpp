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

#include "json.hpp"

#include <sstream>

namespace ptsokit {

namespace {

using json = nlohmann::ordered_json;

json label_json(const Label &l) {
  json j;
  j["kind"] = kind_name(l.kind());
  if (l.has_loc())
    j["loc"] = l.loc();
  if (l.has_val_r())
    j["rval"] = l.val_r();
  if (l.has_val_w())
    j["wval"] = l.val_w();
  return j;
}

Label label_from(const json &j) {
  const std::string k = j.at("kind").get<std::string>();
  auto loc = [&] { return j.at("loc").get<LocId>(); };
  auto rv = [&] { return j.at("rval").get<Value>(); };
  auto wv = [&] { return j.at("wval").get<Value>(); };
  if (k == kind_name(Kind::R)) return Label::read(loc(), rv());
  if (k == kind_name(Kind::W)) return Label::write(loc(), wv());
  if (k == kind_name(Kind::U)) return Label::rmw(loc(), rv(), wv());
  if (k == kind_name(Kind::Rex)) return Label::read_ex(loc(), rv());
  if (k == kind_name(Kind::MF)) return Label::mfence();
  if (k == kind_name(Kind::FL)) return Label::flush(loc());
  if (k == kind_name(Kind::FO)) return Label::flush_opt(loc());
  if (k == kind_name(Kind::SF)) return Label::sfence();
  throw std::invalid_argument("unknown label kind '" + k + "'");
}

json trace_json(std::span<const TraceEntry> tr) {
  json a = json::array();
  for (const auto &e : tr) {
    if (e.crash) {
      a.push_back("crash");
      continue;
    }
    json j;
    j["tid"] = e.tid;
    j.update(label_json(e.lab));
    a.push_back(std::move(j));
  }
  return a;
}

ObservableTrace trace_from(const json &a) {
  ObservableTrace tr;
  for (const auto &e : a) {
    if (e.is_string()) {
      if (e.get<std::string>() != "crash")
        throw std::invalid_argument("bad trace entry");
      tr.push_back(TraceEntry::crash_marker());
    } else {
      tr.push_back(TraceEntry::event(e.at("tid").get<ThreadId>(), label_from(e)));
    }
  }
  return tr;
}

json state_json(const ProgramState &ps) {
  json a = json::array();
  for (const auto &t : ps.threads)
    a.push_back(json{{"pc", t.pc}, {"regs", t.regs}});
  return a;
}

ProgramState state_from(const json &a) {
  ProgramState ps;
  for (const auto &t : a)
    ps.threads.push_back({t.at("pc").get<Pc>(), t.at("regs").get<std::vector<Value>>()});
  return ps;
}

const char *check_kind_name(CheckKind k) { return k == CheckKind::Allowed ? "allowed" : "forbidden"; }

std::string dump(const json &j, int indent) { return j.dump(indent < 0 ? -1 : indent); }

std::string memory_text(const Memory &m, const Symbols *names) {
  std::string s = "{";
  for (LocId x = 0; x < m.size(); ++x) {
    if (x)
      s += ", ";
    s += (names ? names->location(x) : "l" + std::to_string(x)) + "=" + std::to_string(m[x]);
  }
  return s + "}";
}

std::string registers_text(const RegisterState &r, const Symbols *names) {
  std::string s;
  for (ThreadId t = 0; t < r.size(); ++t) {
    if (t)
      s += " | ";
    s += names ? names->thread(t) : "t" + std::to_string(t);
    s += ":";
    for (std::size_t i = 0; i < r[t].size(); ++i)
      s += " " + (names ? names->reg(t, i) : "r" + std::to_string(i + 1)) + "=" + std::to_string(r[t][i]);
  }
  return s;
}

} // namespace

std::string summary_to_json(const ReachabilitySummary &s, int indent) {
  json j;
  j["test"] = s.test;
  j["model"] = s.model;
  json checks = json::array();
  for (const auto &c : s.checks) {
    json jc;
    jc["kind"] = check_kind_name(c.kind);
    jc["cond"] = c.condition;
    jc["pass"] = c.pass;
    if (c.witness)
      jc["witness"] = trace_json(*c.witness);
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  j["stats"] = json{{"visited", s.stats.visited}, {"transitions", s.stats.transitions}};
  j["final_states"] = json::array();
  for (const auto &f : s.final_states)
    j["final_states"].push_back(f);
  j["nv_memories"] = json::array();
  for (const auto &m : s.nv_memories)
    j["nv_memories"].push_back(m);
  if (!s.program_states.empty()) {
    json a = json::array();
    for (const auto &ps : s.program_states)
      a.push_back(state_json(ps));
    j["program_states"] = std::move(a);
  }
  if (!s.observations.empty()) {
    json a = json::array();
    for (const auto &[ps, m] : s.observations)
      a.push_back(json{{"state", state_json(ps)}, {"mem", m}});
    j["observations"] = std::move(a);
  }
  return dump(j, indent);
}

ReachabilitySummary summary_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ReachabilitySummary s;
    s.test = j.at("test").get<std::string>();
    s.model = j.at("model").get<std::string>();
    for (const auto &jc : j.at("checks")) {
      CheckResult c;
      const std::string k = jc.at("kind").get<std::string>();
      if (k != "allowed" && k != "forbidden")
        throw std::invalid_argument("bad check kind '" + k + "'");
      c.kind = k == "allowed" ? CheckKind::Allowed : CheckKind::Forbidden;
      c.condition = jc.at("cond").get<std::string>();
      c.pass = jc.at("pass").get<bool>();
      if (jc.contains("witness"))
        c.witness = trace_from(jc.at("witness"));
      s.checks.push_back(std::move(c));
    }
    s.stats.visited = j.at("stats").at("visited").get<std::size_t>();
    s.stats.transitions = j.at("stats").at("transitions").get<std::size_t>();
    for (const auto &f : j.at("final_states"))
      s.final_states.insert(f.get<RegisterState>());
    for (const auto &m : j.at("nv_memories"))
      s.nv_memories.insert(m.get<Memory>());
    if (j.contains("program_states"))
      for (const auto &ps : j.at("program_states"))
        s.program_states.insert(state_from(ps));
    if (j.contains("observations"))
      for (const auto &o : j.at("observations"))
        s.observations.emplace(state_from(o.at("state")), o.at("mem").get<Memory>());
    return s;
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("malformed summary: ") + e.what());
  }
}

std::string comparison_to_json(const Comparison &c, std::string_view test, std::string_view a, std::string_view b,
                               int indent) {
  json j;
  j["test"] = test;
  j["models"] = json::array({a, b});
  j["equal"] = c.equal;
  if (!c.equal) {
    json w;
    w["only_in"] = c.side ? b : a;
    if (c.kind == Comparison::Kind::FinalState)
      w["final_state"] = c.final_state;
    else
      w["nv_memory"] = c.nv_memory;
    j["witness"] = std::move(w);
  }
  return dump(j, indent);
}

std::string race_to_json(const std::optional<RaceReport> &r, std::string_view test, bool strong,
                         const Symbols *names, int indent) {
  json j;
  j["test"] = test;
  j["strong"] = strong;
  j["racy"] = r.has_value();
  if (r) {
    json jr;
    jr["tid"] = r->tid;
    jr["label"] = label_json(r->lab);
    jr["tid_w"] = r->tid_w;
    jr["label_w"] = label_json(r->lab_w);
    jr["text"] = format_race(r, strong, names);
    jr["state"] = state_json(r->state);
    jr["witness"] = trace_json(r->witness_trace);
    j["race"] = std::move(jr);
  }
  return dump(j, indent);
}

std::string format_trace(std::span<const TraceEntry> tr, const Symbols *names) {
  std::string s;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (i)
      s += "; ";
    s += to_string(tr[i], names);
  }
  return s.empty() ? "(empty)" : s;
}

std::string format_summary(const ReachabilitySummary &s, const Symbols *names) {
  std::ostringstream os;
  os << s.test << " under " << s.model << ": " << s.stats.visited << " states, " << s.stats.transitions
     << " transitions\n";
  for (const auto &c : s.checks) {
    os << "  " << (c.pass ? "PASS " : "FAIL ") << check_kind_name(c.kind) << " { " << c.condition << " }\n";
    if (c.witness && c.kind == CheckKind::Forbidden)
      os << "    witness: " << format_trace(*c.witness, names) << "\n";
  }
  os << "  final states: " << s.final_states.size() << "\n";
  for (const auto &f : s.final_states)
    os << "    " << registers_text(f, names) << "\n";
  os << "  nv memories: " << s.nv_memories.size() << "\n";
  for (const auto &m : s.nv_memories)
    os << "    " << memory_text(m, names) << "\n";
  return os.str();
}

std::string format_comparison(const Comparison &c, std::string_view a, std::string_view b, const Symbols *names) {
  std::ostringstream os;
  if (c.equal) {
    os << a << " and " << b << " agree on final states and nv memories\n";
    return os.str();
  }
  os << "only under " << (c.side ? b : a) << ": ";
  if (c.kind == Comparison::Kind::FinalState)
    os << "final state " << registers_text(c.final_state, names) << "\n";
  else
    os << "nv memory " << memory_text(c.nv_memory, names) << "\n";
  return os.str();
}

std::string format_race(const std::optional<RaceReport> &r, bool strong, const Symbols *names) {
  const char *what = strong ? "strong race" : "race";
  if (!r)
    return std::string("no ") + what + "\n";
  std::ostringstream os;
  auto thread = [&](ThreadId t) { return names ? names->thread(t) : "t" + std::to_string(t); };
  os << what << ": " << thread(r->tid) << " " << to_string(r->lab, names) << " against " << thread(r->tid_w) << " "
     << to_string(r->lab_w, names) << "\n";
  os << "  trace: " << format_trace(r->witness_trace, names) << "\n";
  return os.str();
}

} // namespace ptsokit
