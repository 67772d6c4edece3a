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

#include "ptsokit/ptsokit.h"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kLimit = 3 };

struct Common {
  int64_t crashes = -1;
  int64_t unroll = -1;
  int64_t limit = -1;
  int64_t chain = -1;
  bool json = false;
  bool strong = false;

  ptk_options options() const {
    ptk_options o;
    ptk_options_init(&o);
    o.crashes = crashes;
    o.unroll = unroll;
    o.limit = limit;
    o.chain = chain;
    o.strong = strong;
    return o;
  }
};

int exit_for(ptk_status s) {
  if (s == PTK_OK)
    return kOk;
  std::cerr << "ptsokit: " << ptk_last_error() << "\n";
  return s == PTK_ERR_LIMIT ? kLimit : kUsage;
}

class Result {
public:
  ~Result() { ptk_result_free(r_); }
  ptk_result **out() { return &r_; }
  int emit(bool json, bool strict) const {
    std::cout << (json ? ptk_result_json(r_) : ptk_result_text(r_));
    if (json)
      std::cout << "\n";
    return strict && !ptk_result_ok(r_) ? kFailed : kOk;
  }
  const char *text() const { return ptk_result_text(r_); }

private:
  ptk_result *r_ = nullptr;
};

class Test {
public:
  ~Test() { ptk_test_free(t_); }
  ptk_status load(const std::string &path, const ptk_options &o) { return ptk_test_load(path.c_str(), &o, &t_); }
  const ptk_test *get() const { return t_; }

private:
  ptk_test *t_ = nullptr;
};

void add_common(CLI::App *cmd, Common &c, bool models_decl) {
  cmd->add_option("--crashes", c.crashes, "Crash budget override")->check(CLI::NonNegativeNumber);
  cmd->add_option("--unroll", c.unroll, "Loop unrolling override")->check(CLI::NonNegativeNumber);
  cmd->add_option("--limit", c.limit, "State (or graph) count limit")->check(CLI::PositiveNumber);
  cmd->add_flag("--json", c.json, "Machine-readable output");
  if (models_decl)
    cmd->add_option("--chain", c.chain, "Chain length for declarative models")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Persistent x86-TSO litmus checker"};
  app.set_version_flag("--version", std::string(ptk_version()));
  app.require_subcommand(1);

  Common common;
  std::string path, out_path;
  std::vector<std::string> models;

  const std::string model_help = "ptso, ptsosyn, psc, pscf, dptso, dptsomo or dpsc";
  auto *run = app.add_subcommand("run", "Explore a test and print its summary");
  run->add_option("test", path, "Litmus file")->required();
  run->add_option("--model", models, model_help);
  add_common(run, common, true);

  auto *check = app.add_subcommand("check", "Exit 0 iff every check passes");
  check->add_option("test", path, "Litmus file")->required();
  check->add_option("--model", models, model_help);
  add_common(check, common, true);

  auto *compare = app.add_subcommand("compare", "Compare reachable final states and nv memories of two models");
  compare->add_option("test", path, "Litmus file")->required();
  compare->add_option("--model", models, model_help)->required()->expected(2);
  add_common(compare, common, true);

  auto *races = app.add_subcommand("races", "Search for races under PSC");
  races->add_option("test", path, "Litmus file")->required();
  races->add_flag("--strong", common.strong, "Only report unprotected races");
  add_common(races, common, false);

  auto *map = app.add_subcommand("map", "Insert fences so that the test is not strongly racy");
  map->add_option("test", path, "Litmus file")->required();
  map->add_option("-o,--output", out_path, "Output litmus file (default: stdout)");
  add_common(map, common, false);

  auto *corpus = app.add_subcommand("corpus", "Run every test of a directory");
  corpus->add_option("dir", path, "Directory of .litmus files")->required();
  corpus->add_option("--model", models, model_help)->expected(0, 1);
  add_common(corpus, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  const ptk_options opts = common.options();
  Result res;

  if (corpus->parsed()) {
    const char *m = models.empty() ? nullptr : models.front().c_str();
    if (ptk_status s = ptk_corpus(path.c_str(), m, &opts, res.out()))
      return exit_for(s);
    return res.emit(common.json, true);
  }

  Test test;
  if (ptk_status s = test.load(path, opts))
    return exit_for(s);

  if (run->parsed() || check->parsed()) {
    if (models.empty())
      models.push_back("ptso");
    int code = kOk;
    for (const auto &m : models) {
      Result r;
      if (ptk_status s = ptk_check(test.get(), m.c_str(), &opts, r.out()))
        return exit_for(s);
      code = std::max(code, r.emit(common.json, check->parsed()));
    }
    return code;
  }
  if (compare->parsed()) {
    if (ptk_status s = ptk_compare(test.get(), models[0].c_str(), models[1].c_str(), &opts, res.out()))
      return exit_for(s);
    return res.emit(common.json, true);
  }
  if (races->parsed()) {
    if (ptk_status s = ptk_races(test.get(), &opts, res.out()))
      return exit_for(s);
    return res.emit(common.json, true);
  }
  if (ptk_status s = ptk_map(test.get(), &opts, res.out()))
    return exit_for(s);
  if (out_path.empty())
    return res.emit(common.json, false);
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << res.text())) {
    std::cerr << "ptsokit: cannot write " << out_path << "\n";
    return kUsage;
  }
  if (common.json)
    res.emit(true, false);
  return kOk;
}
