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

#ifndef PTSOKIT_H
#define PTSOKIT_H

#include <stdint.h>

#if defined(_WIN32)
#define PTK_API __declspec(dllexport)
#else
#define PTK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptk_status {
  PTK_OK = 0,
  PTK_ERR_ARGUMENT = 1,
  PTK_ERR_PARSE = 2,
  PTK_ERR_IO = 3,
  PTK_ERR_LIMIT = 4,
  PTK_ERR_INTERNAL = 5
} ptk_status;

typedef struct ptk_test ptk_test;
typedef struct ptk_result ptk_result;

/* Negative fields mean "use the default". */
typedef struct ptk_options {
  int64_t crashes; /* crash budget override */
  int64_t unroll;  /* loop unrolling override */
  int64_t limit;   /* state (or graph) count limit */
  int64_t chain;   /* declarative chain length; defaults to crashes + 1 */
  int32_t strong;  /* races: search for strong races */
  int32_t indent;  /* JSON indentation; negative for compact */
} ptk_options;

PTK_API void ptk_options_init(ptk_options *opts);

/* opts may be NULL. On failure *out is NULL and ptk_last_error() explains. */
PTK_API ptk_status ptk_test_parse(const char *text, const ptk_options *opts, ptk_test **out);
PTK_API ptk_status ptk_test_load(const char *path, const ptk_options *opts, ptk_test **out);
PTK_API void ptk_test_free(ptk_test *test);
PTK_API const char *ptk_test_name(const ptk_test *test);

/* Models: ptso, ptsosyn, psc, pscf, dptso, dptsomo, dpsc. */
PTK_API ptk_status ptk_check(const ptk_test *test, const char *model, const ptk_options *opts, ptk_result **out);
PTK_API ptk_status ptk_compare(const ptk_test *test, const char *model_a, const char *model_b,
                               const ptk_options *opts, ptk_result **out);
PTK_API ptk_status ptk_races(const ptk_test *test, const ptk_options *opts, ptk_result **out);
/* The result text is the fenced test in litmus syntax. */
PTK_API ptk_status ptk_map(const ptk_test *test, const ptk_options *opts, ptk_result **out);
/* Runs every *.litmus file of dir under model (NULL for all models). */
PTK_API ptk_status ptk_corpus(const char *dir, const char *model, const ptk_options *opts, ptk_result **out);

/* 1 when all checks pass, the models agree, or no race was found. */
PTK_API int ptk_result_ok(const ptk_result *result);
PTK_API const char *ptk_result_json(const ptk_result *result);
PTK_API const char *ptk_result_text(const ptk_result *result);
PTK_API void ptk_result_free(ptk_result *result);

/* Message of the last failure on the calling thread. */
PTK_API const char *ptk_last_error(void);
PTK_API const char *ptk_version(void);

#ifdef __cplusplus
}
#endif

#endif
