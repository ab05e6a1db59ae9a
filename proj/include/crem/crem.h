// Copyright 2026 The crem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the crem toolkit.
 *
 * Every function returns a crem_status; on failure crem_last_error() holds a
 * message for the calling thread. Strings handed out by the library are
 * released with crem_string_free. Reports are single JSON objects.
 */

#ifndef CREM_CREM_H_
#define CREM_CREM_H_

#include <stddef.h>

#if defined(_WIN32)
#define CREM_API __declspec(dllexport)
#else
#define CREM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum crem_status {
  CREM_OK = 0,
  CREM_ERR_USAGE = 1,
  CREM_ERR_INPUT = 2,
  CREM_ERR_PROTOCOL = 3,
  CREM_ERR_INTERNAL = 4
} crem_status;

typedef struct crem_config crem_config;
typedef struct crem_scorer crem_scorer;

CREM_API const char* crem_version(void);

/* Message of the last failed call on this thread; "" when none. */
CREM_API const char* crem_last_error(void);

CREM_API void crem_string_free(char* s);

/* Run configuration. Keys are the long CLI flag names without dashes:
 * input (repeatable), output, detector, scorer, seed, workers, deterministic,
 * alpha, beta, holdout-n, dataset-kind, dedup-against, stats-kind,
 * gender-names, timeout-ms. */
CREM_API crem_config* crem_config_create(void);
CREM_API void crem_config_destroy(crem_config* config);
CREM_API crem_status crem_config_set(crem_config* config, const char* key, const char* value);

/* Runs. On success *report receives a JSON object. */
CREM_API crem_status crem_run_mine(const crem_config* config, char** report);
CREM_API crem_status crem_run_split(const crem_config* config, char** report);
CREM_API crem_status crem_run_stats(const crem_config* config, char** report);
CREM_API crem_status crem_run_eval(const crem_config* config, char** report);
CREM_API crem_status crem_run_conformance(const crem_config* config, char** report);

/* Stops mining runs from reading further input. Async-signal-safe. */
CREM_API void crem_cancel(void);

/* Sentence spans of UTF-8 text as a JSON array of [start, end] code-point
 * pairs. */
CREM_API crem_status crem_segment(const char* text, char** spans_json);

/* Dataset records (one JSON object per line) mined from one document with
 * the detector named by `config` (builtin when config is NULL). */
CREM_API crem_status crem_generate(const crem_config* config, const char* doc_id, const char* text,
                                   char** records);

/* -logp_a + alpha * max(0, logp_b - logp_a + beta). */
CREM_API crem_status crem_loss(double logp_a, double logp_b, double alpha, double beta, double* out);

/* Index of the largest score, lowest index on ties. */
CREM_API crem_status crem_select_candidate(const double* scores, size_t n, size_t* index);

/* spec: "reference", "reference:<counts file>" or "cmd:<command line>";
 * external scorers get `workers` processes. */
CREM_API crem_status crem_scorer_create(const char* spec, size_t workers, crem_scorer** scorer);
CREM_API void crem_scorer_destroy(crem_scorer* scorer);
/* Writes n log-scores. masked_text must contain exactly one "[MASK]". */
CREM_API crem_status crem_scorer_score(crem_scorer* scorer, const char* masked_text,
                                       const char* const* candidates, size_t n, double* logprobs);

#ifdef __cplusplus
}
#endif

#endif /* CREM_CREM_H_ */
