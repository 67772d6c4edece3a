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

#ifndef PTSOKIT_CORE_DRF_HPP
#define PTSOKIT_CORE_DRF_HPP

#include "ptsokit/core/declarative.hpp"
#include "ptsokit/core/explorer.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ptsokit {

struct RaceReport {
  ProgramState state;
  ThreadId tid = 0;
  Label lab;
  ThreadId tid_w = 0;
  Label lab_w;
  bool strong = false;
  ObservableTrace witness_trace;

  friend bool operator==(const RaceReport &, const RaceReport &) = default;
};

/// The writer side of an lab-race exhibited by `tid` in `ps`, if any.
/// `lab` must be a read or flush-optimal label.
std::optional<std::pair<ThreadId, Label>> exhibits_race(const ProgramState &ps, const Program &prog, ThreadId tid,
                                                        const Label &lab, std::span<const Value> universe);

/// Searches PSC-reachable states (crashes per the test budget), breadth first.
std::optional<RaceReport> is_racy(const LitmusTest &test, std::size_t state_limit = kDefaultStateLimit);
std::optional<RaceReport> is_strongly_racy(const LitmusTest &test, std::size_t state_limit = kDefaultStateLimit);

bool unprotected_after(const Label &lab, std::span<const Label> rho);

/// Labels of `tid` after its last crash.
std::vector<Label> max_crashless_suffix(std::span<const TraceEntry> tr, ThreadId tid);

/// `e` indexes a read or flush-optimal event of `g`.
bool g_unprotected(const ExecutionGraph &g, std::size_t e);

/// Places an mfence before every possibly unprotected read and an sfence
/// before every possibly unprotected flush-optimal. Code must be acyclic.
Program insert_fences(const Program &prog);
LitmusTest insert_fences(const LitmusTest &test);

} // namespace ptsokit

#endif
