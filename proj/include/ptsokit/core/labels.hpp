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

#ifndef PTSOKIT_CORE_LABELS_HPP
#define PTSOKIT_CORE_LABELS_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ptsokit {

// Locations and threads are interned small integers; their display names
// live in the owning Program.
using LocId = std::uint16_t;
using ThreadId = std::uint16_t;
using Value = std::uint32_t;

/// Non-volatile (or volatile) memory contents, indexed by LocId.
using Memory = std::vector<Value>;

enum class Kind : std::uint8_t { R, W, U, Rex, MF, FL, FO, SF };

const char *kind_name(Kind k);

/// An event label. Attributes that do not apply to the kind are stored as
/// zero so that the defaulted comparison stays canonical.
class Label {
public:
  constexpr Label() = default;

  static constexpr Label read(LocId x, Value v) { return {Kind::R, x, v, 0}; }
  static constexpr Label write(LocId x, Value v) { return {Kind::W, x, 0, v}; }
  static constexpr Label rmw(LocId x, Value vr, Value vw) { return {Kind::U, x, vr, vw}; }
  static constexpr Label read_ex(LocId x, Value v) { return {Kind::Rex, x, v, 0}; }
  static constexpr Label mfence() { return {Kind::MF, 0, 0, 0}; }
  static constexpr Label flush(LocId x) { return {Kind::FL, x, 0, 0}; }
  static constexpr Label flush_opt(LocId x) { return {Kind::FO, x, 0, 0}; }
  static constexpr Label sfence() { return {Kind::SF, 0, 0, 0}; }

  constexpr Kind kind() const { return kind_; }
  constexpr bool has_loc() const { return kind_ != Kind::MF && kind_ != Kind::SF; }
  constexpr bool has_val_r() const {
    return kind_ == Kind::R || kind_ == Kind::U || kind_ == Kind::Rex;
  }
  constexpr bool has_val_w() const { return kind_ == Kind::W || kind_ == Kind::U; }

  // Accessors return 0 when the attribute is absent.
  constexpr LocId loc() const { return loc_; }
  constexpr Value val_r() const { return val_r_; }
  constexpr Value val_w() const { return val_w_; }

  constexpr bool is(Kind k) const { return kind_ == k; }

  friend constexpr auto operator<=>(const Label &, const Label &) = default;

private:
  constexpr Label(Kind k, LocId x, Value vr, Value vw)
      : kind_(k), loc_(x), val_r_(vr), val_w_(vw) {}

  Kind kind_ = Kind::MF;
  LocId loc_ = 0;
  Value val_r_ = 0;
  Value val_w_ = 0;
};

/// Display names used when rendering labels and traces.
struct Symbols {
  std::vector<std::string> threads;
  std::vector<std::string> locations;
  // Register names per thread.
  std::vector<std::vector<std::string>> registers;

  std::string thread(ThreadId t) const;
  std::string location(LocId x) const;
  std::string reg(ThreadId t, std::size_t r) const;
};

std::string to_string(const Label &lab, const Symbols *names = nullptr);

/// Observable half of a program transition label.
struct ThreadLabel {
  ThreadId tid = 0;
  Label lab;

  friend constexpr auto operator<=>(const ThreadLabel &, const ThreadLabel &) = default;
};

/// A program transition label; std::nullopt is the silent label.
using TransitionLabel = std::optional<ThreadLabel>;

/// One element of an observable trace: either a (tid, label) pair or a
/// crash marker.
struct TraceEntry {
  bool crash = false;
  ThreadId tid = 0;
  Label lab;

  static TraceEntry event(ThreadId t, Label l) { return {false, t, l}; }
  static TraceEntry crash_marker() { return {true, 0, Label{}}; }

  friend constexpr auto operator<=>(const TraceEntry &, const TraceEntry &) = default;
};

using ObservableTrace = std::vector<TraceEntry>;

std::string to_string(const TraceEntry &e, const Symbols *names = nullptr);

/// Labels of `tr` issued by `tid`, in order. Crash markers are skipped.
std::vector<Label> restrict_trace(std::span<const TraceEntry> tr, ThreadId tid);

/// True iff, for every thread, the restriction of `shorter` is a prefix of
/// the restriction of `longer`. Both traces are expected to be crash-free.
bool per_thread_prefix(std::span<const TraceEntry> shorter, std::span<const TraceEntry> longer);

} // namespace ptsokit

#endif
