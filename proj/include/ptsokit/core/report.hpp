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

#ifndef PTSOKIT_CORE_REPORT_HPP
#define PTSOKIT_CORE_REPORT_HPP

#include "ptsokit/core/drf.hpp"
#include "ptsokit/core/explorer.hpp"

#include <string>
#include <string_view>

namespace ptsokit {

/// Stable-key-order JSON. Program states and observations are emitted
/// only when non-empty.
std::string summary_to_json(const ReachabilitySummary &s, int indent = 2);

/// Inverse of summary_to_json. Throws std::invalid_argument on malformed
/// input.
ReachabilitySummary summary_from_json(std::string_view text);

std::string comparison_to_json(const Comparison &c, std::string_view test, std::string_view a, std::string_view b,
                               int indent = 2);
std::string race_to_json(const std::optional<RaceReport> &r, std::string_view test, bool strong,
                         const Symbols *names = nullptr, int indent = 2);

std::string format_summary(const ReachabilitySummary &s, const Symbols *names = nullptr);
std::string format_comparison(const Comparison &c, std::string_view a, std::string_view b,
                              const Symbols *names = nullptr);
std::string format_race(const std::optional<RaceReport> &r, bool strong, const Symbols *names = nullptr);
std::string format_trace(std::span<const TraceEntry> tr, const Symbols *names = nullptr);

} // namespace ptsokit

#endif
