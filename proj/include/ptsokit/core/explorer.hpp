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

#ifndef PTSOKIT_CORE_EXPLORER_HPP
#define PTSOKIT_CORE_EXPLORER_HPP

#include "ptsokit/core/litmus.hpp"
#include "ptsokit/core/machines_sc.hpp"
#include "ptsokit/core/machines_tso.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ptsokit {

enum class Model : std::uint8_t { Ptso, PtsoSyn, Psc, Pscf };

const char *model_name(Model m);
std::optional<Model> parse_model(std::string_view name);

/// Thrown when an exploration exceeds its state budget.
class LimitExceeded : public std::runtime_error {
public:
  LimitExceeded(const std::string &what, std::size_t limit)
      : std::runtime_error(what + " exceeded the limit of " + std::to_string(limit)), limit_(limit) {}
  std::size_t limit() const { return limit_; }

private:
  std::size_t limit_;
};

constexpr std::size_t kDefaultStateLimit = 10'000'000;

struct ExploreOptions {
  std::size_t state_limit = kDefaultStateLimit;
  bool depth_first = false;
  bool record_witnesses = true;
  // Collect every reachable program state.
  bool record_program_states = false;
  // Collect every reachable (program state, nv memory) pair.
  bool record_observations = false;
};

struct CheckResult {
  CheckKind kind = CheckKind::Allowed;
  std::string condition;
  bool pass = false;
  // A trace reaching a state satisfying the condition, when one exists.
  std::optional<ObservableTrace> witness;

  friend bool operator==(const CheckResult &, const CheckResult &) = default;
};

struct ExploreStats {
  std::size_t visited = 0;
  std::size_t transitions = 0;

  friend bool operator==(const ExploreStats &, const ExploreStats &) = default;
};

using Observation = std::pair<ProgramState, Memory>;

struct ReachabilitySummary {
  std::string test;
  std::string model;
  std::vector<CheckResult> checks;
  ExploreStats stats;
  std::set<RegisterState> final_states;
  std::set<Memory> nv_memories;
  // Filled only when requested; program states have silent steps closed.
  std::set<ProgramState> program_states;
  std::set<Observation> observations;

  bool all_pass() const;

  friend bool operator==(const ReachabilitySummary &, const ReachabilitySummary &) = default;
};

/// Memory side of a crash: buffers and volatile state reset, mem kept.
PtsoState crash_step(const PtsoState &s);
PtsoSynState crash_step(const PtsoSynState &s);
PscState crash_step(const PscState &s);
PscfState crash_step(const PscfState &s);

/// Runs every silent step of every thread. Silent steps are thread-local and
/// deterministic, so exploring only closed states loses no observation.
ProgramState close_silent(ProgramState ps, const Program &prog);

ReachabilitySummary explore(const LitmusTest &test, Model model, const ExploreOptions &opts = {});

/// Pass/fail per applicable check, in file order.
std::vector<bool> verdict(const LitmusTest &test, Model model, const ExploreOptions &opts = {});

struct Comparison {
  bool equal = true;
  enum class Kind : std::uint8_t { None, FinalState, NvMemory } kind = Kind::None;
  // Index (0 or 1) of the model whose summary holds the witness.
  int side = 0;
  RegisterState final_state;
  Memory nv_memory;
};

/// Compares final states and nv memories; on a mismatch reports the least
/// element of the symmetric difference, final states first.
Comparison compare_summaries(const ReachabilitySummary &a, const ReachabilitySummary &b);
Comparison compare_models(const LitmusTest &test, Model a, Model b, const ExploreOptions &opts = {});

} // namespace ptsokit

#endif
