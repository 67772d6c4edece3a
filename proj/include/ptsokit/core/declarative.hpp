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

#ifndef PTSOKIT_CORE_DECLARATIVE_HPP
#define PTSOKIT_CORE_DECLARATIVE_HPP

#include "ptsokit/core/litmus.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptsokit {

/// Dense relation over at most 64 events.
class Relation {
public:
  static constexpr std::size_t kMaxEvents = 64;

  Relation() = default;
  explicit Relation(std::size_t n);

  std::size_t size() const { return rows_.size(); }
  bool has(std::size_t a, std::size_t b) const { return (rows_[a] >> b) & 1u; }
  void add(std::size_t a, std::size_t b) { rows_[a] |= std::uint64_t{1} << b; }
  void remove(std::size_t a, std::size_t b) { rows_[a] &= ~(std::uint64_t{1} << b); }
  std::uint64_t row(std::size_t a) const { return rows_[a]; }
  bool empty() const;
  std::size_t count() const;

  Relation &operator|=(const Relation &o);
  friend Relation operator|(Relation a, const Relation &b) { return a |= b; }
  /// Relational composition: a ; b.
  friend Relation operator*(const Relation &a, const Relation &b);
  Relation inverse() const;
  Relation closure() const;
  /// R? : the relation plus the identity.
  Relation reflexive() const;
  bool irreflexive() const;
  bool acyclic() const { return closure().irreflexive(); }
  bool subset_of(const Relation &o) const;
  /// [A] ; R ; [B] for event masks A and B.
  Relation restrict(std::uint64_t dom, std::uint64_t codom) const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  friend bool operator==(const Relation &, const Relation &) = default;

private:
  std::vector<std::uint64_t> rows_;
};

/// An event. Initialization events have no thread and serial number 0.
struct Event {
  std::optional<ThreadId> tid;
  std::uint32_t sn = 0;
  Label lab;

  bool is_init() const { return !tid.has_value(); }
  friend auto operator<=>(const Event &, const Event &) = default;
};

/// E, rf and M. Events are kept in canonical order: initialization events
/// by location, then by thread and serial number. `rf[e]` is the source of a
/// read-like event (-1 otherwise) and `mem_assign[x]` the index of M(x).
struct ExecutionGraph {
  std::vector<Event> events;
  std::vector<int> rf;
  std::vector<int> mem_assign;

  std::size_t size() const { return events.size(); }
  std::size_t num_locations() const { return mem_assign.size(); }
  std::uint64_t mask(const std::function<bool(const Event &)> &pred) const;
  std::uint64_t kind_mask(std::initializer_list<Kind> kinds) const;
  /// Events with location x, of any kind.
  std::uint64_t loc_mask(LocId x) const;
  std::uint64_t init_mask() const;

  friend auto operator<=>(const ExecutionGraph &, const ExecutionGraph &) = default;
};

/// Builds an initialized graph from per-thread label sequences. rf and M
/// are left unset (-1).
ExecutionGraph make_graph(const Memory &init, const std::vector<std::vector<Label>> &threads);

/// Checks the structural well-formedness conditions on rf and M.
bool well_formed(const ExecutionGraph &g);

Relation po(const ExecutionGraph &g);
Relation rf_relation(const ExecutionGraph &g);
Relation rfe(const ExecutionGraph &g);
Memory mem_of(const ExecutionGraph &g);
Memory mem_init_of(const ExecutionGraph &g);

Relation fr(const ExecutionGraph &g, const Relation &order);
std::uint64_t flo(const ExecutionGraph &g, LocId x);
Relation dtpo(const ExecutionGraph &g, const Relation &order);
Relation ppo(const ExecutionGraph &g);

/// Total order given as a sequence of the propagated (non-read) events.
using PropagationOrder = std::vector<std::size_t>;
Relation order_relation(std::size_t n, const PropagationOrder &seq);

/// True iff the seven propagation-order conditions hold for `tpo`.
bool dptso_conditions(const ExecutionGraph &g, const PropagationOrder &tpo);
std::optional<PropagationOrder> consistent_dptso(const ExecutionGraph &g);

/// Checks a candidate modification order.
bool dptsomo_conditions(const ExecutionGraph &g, const Relation &mo);
bool dpsc_conditions(const ExecutionGraph &g, const Relation &mo);
std::optional<Relation> consistent_dptsomo(const ExecutionGraph &g);
std::optional<Relation> consistent_dpsc(const ExecutionGraph &g);

enum class DecModel : std::uint8_t { Dptso, Dptsomo, Dpsc };
const char *dec_model_name(DecModel m);
std::optional<DecModel> parse_dec_model(std::string_view name);
bool consistent(const ExecutionGraph &g, DecModel m);

/// Calls `visit(graph, final_state)` for every initialized graph generated
/// by the program: every per-thread progress, every rf choice and every
/// memory assignment. Reads draw values from `universe`. Returning false
/// from `visit` stops the enumeration.
void generate_graphs(const Program &prog, const Memory &init, std::span<const Value> universe,
                     const std::function<bool(const ExecutionGraph &, const ProgramState &)> &visit);

struct DecReachability {
  std::set<ProgramState> program_states;
  std::set<RegisterState> final_states;
  std::set<Memory> nv_memories;
  std::set<std::pair<ProgramState, Memory>> observations;
  std::size_t graphs = 0;
  std::size_t consistent_graphs = 0;
};

/// Chains of at most `max_chain` consistent graphs. Throws LimitExceeded
/// when more than `graph_limit` graphs are examined.
DecReachability dec_reachable(const LitmusTest &test, DecModel m, unsigned max_chain,
                              std::size_t graph_limit = 50'000'000);

/// Summary in the shape produced by the explorer, so that checks and
/// comparisons work uniformly. `max_chain` graphs allow max_chain - 1 crashes.
struct ReachabilitySummary;
ReachabilitySummary dec_summary(const LitmusTest &test, DecModel m, unsigned max_chain,
                                std::size_t graph_limit = 50'000'000);

/// True iff the crash-free trace enumerates the non-initialization events
/// of `g` in an order respecting po.
bool trace_in_graph(std::span<const TraceEntry> tr, const ExecutionGraph &g);

} // namespace ptsokit

#endif
