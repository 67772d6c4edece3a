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

#ifndef PTSOKIT_TESTS_SUPPORT_HPP
#define PTSOKIT_TESTS_SUPPORT_HPP

#include "ptsokit/core/litmus.hpp"

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace ptsokit::testing {

inline std::string corpus_dir() { return PTSOKIT_CORPUS_DIR; }

inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".litmus")
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<LitmusTest> corpus() {
  std::vector<LitmusTest> out;
  for (const auto &f : corpus_files())
    out.push_back(load_litmus(f));
  return out;
}

struct GenConfig {
  unsigned max_threads = 3;
  unsigned max_instructions = 6;
  unsigned max_locations = 3;
  unsigned max_crashes = 1;
  Value max_value = 2;
};

/// Random acyclic test without checks. Values written are drawn from
/// {0..max_value}; FADD adds 1.
inline LitmusTest random_test(std::uint64_t seed, const GenConfig &cfg = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng); };
  LitmusTest t;
  t.name = "random-" + std::to_string(seed);
  const unsigned nlocs = pick(1, cfg.max_locations);
  for (unsigned x = 0; x < nlocs; ++x)
    t.program.locations.push_back("x" + std::to_string(x + 1));
  t.init.assign(nlocs, 0);
  const unsigned nthreads = pick(1, cfg.max_threads);
  for (unsigned tid = 0; tid < nthreads; ++tid) {
    SequentialProgram sp;
    sp.name = "t" + std::to_string(tid + 1);
    const unsigned len = pick(1, cfg.max_instructions);
    std::vector<std::size_t> jumps;
    for (unsigned i = 0; i < len; ++i) {
      const LocId x = static_cast<LocId>(pick(0, nlocs - 1));
      const Value v = pick(0, cfg.max_value);
      auto fresh = [&] {
        sp.regs.push_back("r" + std::to_string(sp.regs.size() + 1));
        return static_cast<RegId>(sp.regs.size() - 1);
      };
      const unsigned roll = pick(0, 99);
      if (roll < 30) {
        sp.code.push_back(Instruction::write(x, Expr::constant(pick(1, cfg.max_value))));
      } else if (roll < 50) {
        sp.code.push_back(Instruction::read(fresh(), x));
      } else if (roll < 62) {
        sp.code.push_back(Instruction::flush_opt(x));
      } else if (roll < 70) {
        sp.code.push_back(Instruction::flush(x));
      } else if (roll < 78) {
        sp.code.push_back(Instruction::sfence());
      } else if (roll < 83) {
        sp.code.push_back(Instruction::mfence());
      } else if (roll < 90) {
        sp.code.push_back(Instruction::cas(fresh(), x, Expr::constant(v), Expr::constant(pick(1, cfg.max_value))));
      } else if (roll < 94) {
        sp.code.push_back(Instruction::fadd(fresh(), x, Expr::constant(1)));
      } else if (!sp.regs.empty() && i + 1 < len) {
        const RegId r = static_cast<RegId>(pick(0, static_cast<unsigned>(sp.regs.size()) - 1));
        sp.code.push_back(Instruction::if_goto(
            Expr::binary(Expr::Op::Eq, Expr::regref(r), Expr::constant(v)), 0));
        jumps.push_back(sp.code.size() - 1);
      } else {
        sp.code.push_back(Instruction::write(x, Expr::constant(pick(1, cfg.max_value))));
      }
    }
    for (std::size_t j : jumps)
      sp.code[j].target = static_cast<Pc>(pick(static_cast<unsigned>(j) + 1, static_cast<unsigned>(sp.code.size())));
    t.program.threads.push_back(std::move(sp));
  }
  t.budget.max_crashes = pick(0, cfg.max_crashes);
  refresh_universe(t);
  return t;
}

} // namespace ptsokit::testing

#endif
