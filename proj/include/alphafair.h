/* Copyright 2026 The alphafair Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the alphafair shared library: weighted alpha-fair packing
 * solver, experiment harness, reference oracles, and structural checks.
 * All handles are opaque; every function that can fail returns af_status and
 * leaves a human-readable message in af_last_error() (thread-local). */

#ifndef ALPHAFAIR_H_
#define ALPHAFAIR_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
  AF_OK = 0,
  AF_ERROR_INVALID_ARGUMENT = 1,
  AF_ERROR_IO = 2,
  AF_ERROR_PARSE = 3,
  AF_ERROR_INVALID_PROBLEM = 4,
  AF_ERROR_EPSILON_RANGE = 5,
  AF_ERROR_FLOAT_RANGE = 6,
  AF_ERROR_SCALE_LIMIT = 7,
  AF_ERROR_LP_REGIME = 8, /* alpha below the LP dispatch threshold */
  AF_ERROR_INVALID_EVENT = 9,
  AF_ERROR_INTERNAL = 10
} af_status;

typedef struct af_problem af_problem;
typedef struct af_result af_result;
typedef struct af_oracle_result af_oracle_result;
typedef struct af_sweep_result af_sweep_result;

const char* af_version(void);

/* Message from the most recent failing call on this thread ("" if none). */
const char* af_last_error(void);

const char* af_status_name(af_status s);

/* Frees a string returned by one of the *_json functions. */
void af_string_free(char* s);

/* ---- problems ---- */

af_status af_problem_load(const char* path, af_problem** out);
af_status af_problem_parse(const char* json_text, af_problem** out);
af_status af_problem_save(const af_problem* p, const char* path);
void af_problem_free(af_problem* p);

size_t af_problem_num_vars(const af_problem* p);
size_t af_problem_num_constraints(const af_problem* p);
double af_problem_alpha(const af_problem* p);
af_status af_problem_set_alpha(af_problem* p, double alpha);
/* Content hash (16 hex chars); buf_size must be >= 17. */
af_status af_problem_hash_hex(const af_problem* p, char* buf, size_t buf_size);

/* ---- solving ---- */

typedef struct af_solve_options {
  double epsilon;
  int clamp_epsilon;     /* 0: reject out-of-range epsilon, 1: clamp */
  int async_mode;        /* 0: synchronous, 1: independent activation */
  double q;              /* activation probability in async mode */
  uint64_t seed;
  uint64_t max_rounds;   /* 0: default budget */
  uint64_t min_rounds;
  uint32_t trace_every;  /* 0: keep no trace */
} af_solve_options;

void af_solve_options_init(af_solve_options* options);

typedef struct af_regime_info {
  int mode; /* 0: general, 1: near_one, 2: tiny_alpha_lp */
  double effective_alpha;
  double tiny_threshold;
  double near_one_window;
} af_regime_info;

af_status af_dispatch_regime(const af_problem* p, double epsilon,
                             int clamp_epsilon, af_regime_info* out);

/* Runs the round dynamics. Budget exhaustion is not an error; inspect
 * af_result_converged. Returns AF_ERROR_LP_REGIME for tiny alpha. */
af_status af_solve(const af_problem* p, const af_solve_options* options,
                   af_result** out);

/* Like af_solve but drives the scenario document (schedule, events, budget).
 * Explicit options fields override the scenario's schedule. */
af_status af_run_scenario(const af_problem* p, const af_solve_options* options,
                          const char* scenario_json, int use_scenario_schedule,
                          af_result** out);

void af_result_free(af_result* r);
int af_result_converged(const af_result* r);
uint64_t af_result_rounds(const af_result* r);
uint64_t af_result_best_round(const af_result* r);
double af_result_best_gap(const af_result* r);
size_t af_result_dim(const af_result* r);
af_status af_result_allocation(const af_result* r, double* buf, size_t len);
/* Allocation document (x, normalized, scale_c) as a JSON string; free with
 * af_string_free. */
af_status af_result_allocation_json(const af_result* r, char** out);
af_status af_result_write_trace_csv(const af_result* r, const char* path);
af_status af_result_write_report_json(const af_result* r, const char* path);
af_status af_result_write_allocation_json(const af_result* r, const char* path);

/* ---- oracles ---- */

/* method: "barrier" | "closed-form" | "mmf" | "lp". tol applies to barrier. */
af_status af_oracle_solve(const af_problem* p, const char* method, double tol,
                          af_oracle_result** out);
void af_oracle_result_free(af_oracle_result* r);
size_t af_oracle_result_dim(const af_oracle_result* r);
af_status af_oracle_result_x(const af_oracle_result* r, double* buf, size_t len);
double af_oracle_result_kkt_residual(const af_oracle_result* r);
double af_oracle_result_objective(const af_oracle_result* r);
af_status af_oracle_result_json(const af_oracle_result* r, char** out);
af_status af_oracle_result_write_json(const af_oracle_result* r, const char* path);

/* ---- structural checks ---- */

typedef struct af_lemma_result {
  char lemma_id[32];
  char instance_hash[24];
  double claimed;
  double measured;
  double margin;
  int pass;
} af_lemma_result;

/* lemma: "lower-bound" | "lp-approx" | "near-one" | "mmf-limit". */
af_status af_check_lemma(const af_problem* p, const char* lemma, double epsilon,
                         af_lemma_result* out);
/* CSV header and one row for a check result; free with af_string_free. */
af_status af_lemma_csv_header(char** out);
af_status af_lemma_csv_row(const af_lemma_result* r, char** out);

/* ---- sweeps ---- */

af_status af_sweep_run(const af_problem* p, const double* alphas, size_t n_alphas,
                       const double* epsilons, size_t n_epsilons,
                       const af_solve_options* options, unsigned jobs,
                       af_sweep_result** out);
void af_sweep_result_free(af_sweep_result* r);
size_t af_sweep_result_rows(const af_sweep_result* r);
af_status af_sweep_result_csv(const af_sweep_result* r, char** out);
af_status af_sweep_result_write_csv(const af_sweep_result* r, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ALPHAFAIR_H_ */
