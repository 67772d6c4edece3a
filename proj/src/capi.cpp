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

#include "ptsokit/core/declarative.hpp"
#include "ptsokit/core/drf.hpp"
#include "ptsokit/core/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

struct ptk_test {
  ptsokit::LitmusTest test;
};

struct ptk_result {
  bool ok = false;
  std::string json;
  std::string text;
};

namespace {

using namespace ptsokit;
using ojson = nlohmann::ordered_json;

thread_local std::string last_error;

ptk_options defaults() {
  ptk_options o;
  ptk_options_init(&o);
  return o;
}

ParseOverrides overrides_of(const ptk_options &o) {
  ParseOverrides p;
  if (o.crashes >= 0)
    p.crashes = static_cast<unsigned>(o.crashes);
  if (o.unroll >= 0)
    p.unroll = static_cast<unsigned>(o.unroll);
  return p;
}

std::size_t limit_of(const ptk_options &o, std::size_t fallback) {
  return o.limit > 0 ? static_cast<std::size_t>(o.limit) : fallback;
}

template <class F> ptk_status guard(F &&f) {
  try {
    last_error.clear();
    return f();
  } catch (const ParseError &e) {
    last_error = e.what();
    return PTK_ERR_PARSE;
  } catch (const LimitExceeded &e) {
    last_error = e.what();
    return PTK_ERR_LIMIT;
  } catch (const std::filesystem::filesystem_error &e) {
    last_error = e.what();
    return PTK_ERR_IO;
  } catch (const std::invalid_argument &e) {
    last_error = e.what();
    return PTK_ERR_ARGUMENT;
  } catch (const std::length_error &e) {
    last_error = e.what();
    return PTK_ERR_LIMIT;
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
    return PTK_ERR_LIMIT;
  } catch (const std::exception &e) {
    last_error = e.what();
    return PTK_ERR_INTERNAL;
  }
}

ptk_status bad_argument(const char *what) {
  last_error = what;
  return PTK_ERR_ARGUMENT;
}

const std::vector<std::string> &all_models() {
  static const std::vector<std::string> m{"ptso", "ptsosyn", "psc", "pscf", "dptso", "dptsomo", "dpsc"};
  return m;
}

ReachabilitySummary summarize(const LitmusTest &t, const std::string &model, const ptk_options &o) {
  if (auto m = parse_model(model)) {
    ExploreOptions eo;
    eo.state_limit = limit_of(o, kDefaultStateLimit);
    return explore(t, *m, eo);
  }
  if (auto d = parse_dec_model(model)) {
    unsigned chain = o.chain > 0 ? static_cast<unsigned>(o.chain) : t.budget.max_crashes + 1;
    return dec_summary(t, *d, chain, limit_of(o, 50'000'000));
  }
  throw std::invalid_argument("unknown model '" + model + "'");
}

ptk_result *make_result(bool ok, std::string json, std::string text) {
  return new ptk_result{ok, std::move(json), std::move(text)};
}

} // namespace

extern "C" {

void ptk_options_init(ptk_options *opts) {
  if (!opts)
    return;
  opts->crashes = -1;
  opts->unroll = -1;
  opts->limit = -1;
  opts->chain = -1;
  opts->strong = 0;
  opts->indent = 2;
}

ptk_status ptk_test_parse(const char *text, const ptk_options *opts, ptk_test **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!text)
    return bad_argument("null text");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    *out = new ptk_test{parse_litmus(text, overrides_of(o))};
    return PTK_OK;
  });
}

ptk_status ptk_test_load(const char *path, const ptk_options *opts, ptk_test **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!path)
    return bad_argument("null path");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    if (!std::filesystem::is_regular_file(path)) {
      last_error = std::string("cannot open ") + path;
      return PTK_ERR_IO;
    }
    *out = new ptk_test{load_litmus(path, overrides_of(o))};
    return PTK_OK;
  });
}

void ptk_test_free(ptk_test *test) { delete test; }

const char *ptk_test_name(const ptk_test *test) { return test ? test->test.name.c_str() : nullptr; }

ptk_status ptk_check(const ptk_test *test, const char *model, const ptk_options *opts, ptk_result **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!test || !model)
    return bad_argument("null test or model");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    const ReachabilitySummary s = summarize(test->test, model, o);
    const Symbols names = test->test.program.symbols();
    *out = make_result(s.all_pass(), summary_to_json(s, o.indent), format_summary(s, &names));
    return PTK_OK;
  });
}

ptk_status ptk_compare(const ptk_test *test, const char *model_a, const char *model_b, const ptk_options *opts,
                       ptk_result **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!test || !model_a || !model_b)
    return bad_argument("null test or model");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    const Comparison c = compare_summaries(summarize(test->test, model_a, o), summarize(test->test, model_b, o));
    const Symbols names = test->test.program.symbols();
    *out = make_result(c.equal, comparison_to_json(c, test->test.name, model_a, model_b, o.indent),
                       format_comparison(c, model_a, model_b, &names));
    return PTK_OK;
  });
}

ptk_status ptk_races(const ptk_test *test, const ptk_options *opts, ptk_result **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!test)
    return bad_argument("null test");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    const std::size_t limit = limit_of(o, kDefaultStateLimit);
    const bool strong = o.strong != 0;
    auto r = strong ? is_strongly_racy(test->test, limit) : is_racy(test->test, limit);
    const Symbols names = test->test.program.symbols();
    *out = make_result(!r, race_to_json(r, test->test.name, strong, &names, o.indent), format_race(r, strong, &names));
    return PTK_OK;
  });
}

ptk_status ptk_map(const ptk_test *test, const ptk_options *opts, ptk_result **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!test)
    return bad_argument("null test");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    const LitmusTest mapped = insert_fences(test->test);
    std::size_t mf = 0, sf = 0;
    for (std::size_t t = 0; t < mapped.program.num_threads(); ++t) {
      auto count = [&](const Program &p, Op op) {
        const auto &c = p.threads[t].code;
        return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [&](const Instruction &i) { return i.op == op; }));
      };
      mf += count(mapped.program, Op::Mfence) - count(test->test.program, Op::Mfence);
      sf += count(mapped.program, Op::Sfence) - count(test->test.program, Op::Sfence);
    }
    const std::string source = print_litmus(mapped);
    ojson j;
    j["test"] = mapped.name;
    j["inserted"] = ojson{{"mfence", mf}, {"sfence", sf}};
    j["source"] = source;
    *out = make_result(true, j.dump(o.indent < 0 ? -1 : o.indent), source);
    return PTK_OK;
  });
}

ptk_status ptk_corpus(const char *dir, const char *model, const ptk_options *opts, ptk_result **out) {
  if (!out)
    return bad_argument("null output pointer");
  *out = nullptr;
  if (!dir)
    return bad_argument("null directory");
  const ptk_options o = opts ? *opts : defaults();
  return guard([&] {
    std::vector<std::string> models = model ? std::vector<std::string>{model} : all_models();
    for (const auto &m : models)
      if (!parse_model(m) && !parse_dec_model(m))
        throw std::invalid_argument("unknown model '" + m + "'");
    std::vector<std::filesystem::path> files;
    for (const auto &e : std::filesystem::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".litmus")
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw std::invalid_argument(std::string("no .litmus files in ") + dir);
    bool ok = true;
    ojson rows = ojson::array();
    std::ostringstream text;
    for (const auto &f : files) {
      const LitmusTest t = load_litmus(f.string(), overrides_of(o));
      for (const auto &m : models) {
        const ReachabilitySummary s = summarize(t, m, o);
        std::size_t passed = 0;
        for (const auto &c : s.checks)
          passed += c.pass;
        ok = ok && s.all_pass();
        text << (s.all_pass() ? "PASS " : "FAIL ") << t.name << " " << m << " " << passed << "/" << s.checks.size()
             << "\n";
        rows.push_back(ojson::parse(summary_to_json(s, -1)));
      }
    }
    ojson j;
    j["directory"] = dir;
    j["pass"] = ok;
    j["results"] = std::move(rows);
    *out = make_result(ok, j.dump(o.indent < 0 ? -1 : o.indent), text.str());
    return PTK_OK;
  });
}

int ptk_result_ok(const ptk_result *result) { return result && result->ok ? 1 : 0; }

const char *ptk_result_json(const ptk_result *result) { return result ? result->json.c_str() : nullptr; }

const char *ptk_result_text(const ptk_result *result) { return result ? result->text.c_str() : nullptr; }

void ptk_result_free(ptk_result *result) { delete result; }

const char *ptk_last_error(void) { return last_error.c_str(); }

const char *ptk_version(void) { return PTSOKIT_VERSION; }

} // extern "C"
