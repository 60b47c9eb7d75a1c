// Copyright 2026 The alphafair Authors
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

#include "alphafair.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <string>

#include "alphafair/analysis.hpp"
#include "alphafair/errors.hpp"
#include "alphafair/harness.hpp"
#include "alphafair/io.hpp"
#include "alphafair/model.hpp"
#include "alphafair/oracle.hpp"
#include "alphafair/solver.hpp"

using namespace alphafair;

namespace {

thread_local std::string g_last_error;

af_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return AF_ERROR_INVALID_ARGUMENT;
    case ErrorCode::io: return AF_ERROR_IO;
    case ErrorCode::parse: return AF_ERROR_PARSE;
    case ErrorCode::invalid_problem: return AF_ERROR_INVALID_PROBLEM;
    case ErrorCode::epsilon_range: return AF_ERROR_EPSILON_RANGE;
    case ErrorCode::float_range: return AF_ERROR_FLOAT_RANGE;
    case ErrorCode::scale_limit: return AF_ERROR_SCALE_LIMIT;
    case ErrorCode::lp_regime: return AF_ERROR_LP_REGIME;
    case ErrorCode::invalid_event: return AF_ERROR_INVALID_EVENT;
    case ErrorCode::internal: return AF_ERROR_INTERNAL;
  }
  return AF_ERROR_INTERNAL;
}

template <typename Fn>
af_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return AF_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AF_ERROR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

RunOptions to_run_options(const af_solve_options* o) {
  RunOptions r;
  if (o == nullptr) return r;
  r.epsilon = o->epsilon;
  r.epsilon_mode = o->clamp_epsilon ? EpsilonMode::clamp : EpsilonMode::reject;
  r.schedule.mode =
      o->async_mode ? ScheduleMode::async_subset : ScheduleMode::synchronous;
  r.schedule.q = o->q;
  r.schedule.seed = o->seed;
  r.budget = o->max_rounds;
  r.min_rounds = o->min_rounds;
  r.trace_every = o->trace_every;
  return r;
}

}  // namespace

struct af_problem {
  RawProblem raw;
};

struct af_result {
  ExperimentResult res;
  double scale_c = 1.0;
  std::string hash;
};

struct af_oracle_result {
  OracleSolution sol;
  double scale_c = 1.0;
};

struct af_sweep_result {
  std::vector<SweepCell> cells;
};

extern "C" {

const char* af_version(void) { return "0.1.0"; }

const char* af_last_error(void) { return g_last_error.c_str(); }

const char* af_status_name(af_status s) {
  switch (s) {
    case AF_OK: return "ok";
    case AF_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case AF_ERROR_IO: return "io_error";
    case AF_ERROR_PARSE: return "parse_error";
    case AF_ERROR_INVALID_PROBLEM: return "invalid_problem";
    case AF_ERROR_EPSILON_RANGE: return "epsilon_out_of_range";
    case AF_ERROR_FLOAT_RANGE: return "float_range";
    case AF_ERROR_SCALE_LIMIT: return "scale_limit";
    case AF_ERROR_LP_REGIME: return "lp_regime";
    case AF_ERROR_INVALID_EVENT: return "invalid_event";
    case AF_ERROR_INTERNAL: return "internal_error";
  }
  return "?";
}

void af_string_free(char* s) { delete[] s; }

af_status af_problem_load(const char* path, af_problem** out) {
  return guarded([&] {
    if (path == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    auto p = new af_problem{load_problem(path)};
    *out = p;
  });
}

af_status af_problem_parse(const char* json_text, af_problem** out) {
  return guarded([&] {
    if (json_text == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    auto p = new af_problem{parse_problem_json(json_text)};
    *out = p;
  });
}

af_status af_problem_save(const af_problem* p, const char* path) {
  return guarded([&] {
    if (p == nullptr || path == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    save_problem(path, p->raw);
  });
}

void af_problem_free(af_problem* p) { delete p; }

size_t af_problem_num_vars(const af_problem* p) { return p ? p->raw.n : 0; }
size_t af_problem_num_constraints(const af_problem* p) { return p ? p->raw.m : 0; }
double af_problem_alpha(const af_problem* p) { return p ? p->raw.alpha : 0.0; }

af_status af_problem_set_alpha(af_problem* p, double alpha) {
  return guarded([&] {
    if (p == nullptr) raise(ErrorCode::invalid_argument, "null problem");
    if (!(alpha > 0.0)) raise(ErrorCode::invalid_argument, "alpha must be positive");
    p->raw.alpha = alpha;
  });
}

af_status af_problem_hash_hex(const af_problem* p, char* buf, size_t buf_size) {
  return guarded([&] {
    if (p == nullptr || buf == nullptr || buf_size < 17)
      raise(ErrorCode::invalid_argument, "need a buffer of at least 17 bytes");
    const std::string h = problem_hash(p->raw);
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

void af_solve_options_init(af_solve_options* options) {
  if (options == nullptr) return;
  options->epsilon = 0.1;
  options->clamp_epsilon = 0;
  options->async_mode = 0;
  options->q = 1.0;
  options->seed = 0;
  options->max_rounds = 0;
  options->min_rounds = 0;
  options->trace_every = 1;
}

af_status af_dispatch_regime(const af_problem* p, double epsilon,
                             int clamp_epsilon, af_regime_info* out) {
  return guarded([&] {
    if (p == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    const PackingProblem packed = PackingProblem::normalize(p->raw);
    const Regime r = dispatch_regime(
        p->raw.alpha, epsilon, packed,
        clamp_epsilon ? EpsilonMode::clamp : EpsilonMode::reject);
    out->mode = r.mode == RegimeMode::general ? 0
                : r.mode == RegimeMode::near_one ? 1 : 2;
    out->effective_alpha = r.effective_alpha;
    out->tiny_threshold = r.tiny_threshold;
    out->near_one_window = r.near_one_window;
  });
}

af_status af_solve(const af_problem* p, const af_solve_options* options,
                   af_result** out) {
  return guarded([&] {
    if (p == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    RunOptions opt = to_run_options(options);
    auto r = new af_result;
    try {
      r->res = run(p->raw, opt);
      r->scale_c = PackingProblem::normalize(p->raw).scale();
      r->hash = problem_hash(p->raw);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

af_status af_run_scenario(const af_problem* p, const af_solve_options* options,
                          const char* scenario_json, int use_scenario_schedule,
                          af_result** out) {
  return guarded([&] {
    if (p == nullptr || scenario_json == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    const Scenario sc = parse_scenario_json(scenario_json, p->raw.n);
    RunOptions opt = to_run_options(options);
    opt.events = sc.events;
    if (use_scenario_schedule && sc.schedule.has_value())
      opt.schedule = *sc.schedule;
    if (sc.budget.has_value() && opt.budget == 0) opt.budget = *sc.budget;
    auto r = new af_result;
    try {
      r->res = run(p->raw, opt);
      r->scale_c = PackingProblem::normalize(p->raw).scale();
      r->hash = problem_hash(p->raw);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void af_result_free(af_result* r) { delete r; }

int af_result_converged(const af_result* r) {
  return r != nullptr && r->res.report.stop == StopReason::gap_converged ? 1 : 0;
}

uint64_t af_result_rounds(const af_result* r) {
  return r ? r->res.report.rounds_used : 0;
}

uint64_t af_result_best_round(const af_result* r) {
  return r ? r->res.report.best_round : 0;
}

double af_result_best_gap(const af_result* r) {
  return r ? r->res.report.best_gap : 0.0;
}

size_t af_result_dim(const af_result* r) {
  return r ? r->res.x_best.size() : 0;
}

af_status af_result_allocation(const af_result* r, double* buf, size_t len) {
  return guarded([&] {
    if (r == nullptr || buf == nullptr || len < r->res.x_best.size())
      raise(ErrorCode::invalid_argument, "buffer too small");
    std::memcpy(buf, r->res.x_best.data(), r->res.x_best.size() * sizeof(double));
  });
}

static AllocationFile result_allocation_file(const af_result* r) {
  AllocationFile a;
  a.x = r->res.x_best;
  a.normalized = true;
  a.scale_c = r->scale_c;
  return a;
}

af_status af_result_allocation_json(const af_result* r, char** out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    *out = dup_string(allocation_to_json(result_allocation_file(r)));
  });
}

af_status af_result_write_trace_csv(const af_result* r, const char* path) {
  return guarded([&] {
    if (r == nullptr || path == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    save_trace_csv(path, r->res.trace);
  });
}

af_status af_result_write_report_json(const af_result* r, const char* path) {
  return guarded([&] {
    if (r == nullptr || path == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    save_report_json(path, r->res.report, r->hash);
  });
}

af_status af_result_write_allocation_json(const af_result* r, const char* path) {
  return guarded([&] {
    if (r == nullptr || path == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    save_allocation(path, result_allocation_file(r));
  });
}

af_status af_oracle_solve(const af_problem* p, const char* method, double tol,
                          af_oracle_result** out) {
  return guarded([&] {
    if (p == nullptr || method == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    const PackingProblem packed = PackingProblem::normalize(p->raw);
    const std::string m = method;
    OracleSolution sol;
    if (m == "barrier") {
      sol = barrier_solve(packed, packed.alpha(), tol > 0 ? tol : 1e-8);
    } else if (m == "closed-form") {
      if (packed.num_constraints() != 1)
        raise(ErrorCode::invalid_argument,
              "closed-form oracle needs a single-constraint problem");
      std::vector<double> row(packed.num_vars(), 0.0);
      auto cols = packed.matrix().row_cols(0);
      auto vals = packed.matrix().row_vals(0);
      for (std::size_t k = 0; k < cols.size(); ++k) row[cols[k]] = vals[k];
      sol.x = single_constraint_closed_form(packed.weights(), row, packed.alpha());
      sol.method = "closed-form";
      sol.converged = true;
      sol.objective = packed.objective(sol.x);
      sol.kkt_residual = std::max(0.0, packed.max_violation(sol.x));
    } else if (m == "mmf") {
      sol.x = max_min_fair(packed);
      sol.method = "mmf";
      sol.converged = true;
      sol.objective = packed.objective(sol.x);
      sol.kkt_residual = std::max(0.0, packed.max_violation(sol.x));
    } else if (m == "lp") {
      const LpSolution lp = lp_solve(packed, packed.weights());
      sol.x = lp.x;
      sol.method = "lp";
      sol.converged = true;
      sol.objective = lp.value;
      sol.kkt_residual = std::max(0.0, packed.max_violation(sol.x));
    } else {
      raise(ErrorCode::invalid_argument,
            "unknown oracle method '" + m +
                "' (expected barrier|closed-form|mmf|lp)");
    }
    auto r = new af_oracle_result{std::move(sol), packed.scale()};
    *out = r;
  });
}

void af_oracle_result_free(af_oracle_result* r) { delete r; }

size_t af_oracle_result_dim(const af_oracle_result* r) {
  return r ? r->sol.x.size() : 0;
}

af_status af_oracle_result_x(const af_oracle_result* r, double* buf, size_t len) {
  return guarded([&] {
    if (r == nullptr || buf == nullptr || len < r->sol.x.size())
      raise(ErrorCode::invalid_argument, "buffer too small");
    std::memcpy(buf, r->sol.x.data(), r->sol.x.size() * sizeof(double));
  });
}

double af_oracle_result_kkt_residual(const af_oracle_result* r) {
  return r ? r->sol.kkt_residual : 0.0;
}

double af_oracle_result_objective(const af_oracle_result* r) {
  return r ? r->sol.objective : 0.0;
}

static AllocationFile oracle_allocation_file(const af_oracle_result* r) {
  AllocationFile a;
  a.x = r->sol.x;
  a.normalized = true;
  a.scale_c = r->scale_c;
  a.method = r->sol.method;
  a.kkt_residual = r->sol.kkt_residual;
  return a;
}

af_status af_oracle_result_json(const af_oracle_result* r, char** out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    *out = dup_string(allocation_to_json(oracle_allocation_file(r)));
  });
}

af_status af_oracle_result_write_json(const af_oracle_result* r, const char* path) {
  return guarded([&] {
    if (r == nullptr || path == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    save_allocation(path, oracle_allocation_file(r));
  });
}

af_status af_check_lemma(const af_problem* p, const char* lemma, double epsilon,
                         af_lemma_result* out) {
  return guarded([&] {
    if (p == nullptr || lemma == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    const PackingProblem packed = PackingProblem::normalize(p->raw);
    const std::string id = lemma;
    LemmaReport rep;
    if (id == "lower-bound") {
      const OracleSolution oracle = barrier_solve(packed, packed.alpha(), 1e-9);
      rep = check_lower_bound(packed, packed.alpha(), oracle);
    } else if (id == "lp-approx") {
      rep = check_lp_approx(packed, epsilon);
    } else if (id == "near-one") {
      rep = check_near_one_transfer(packed, epsilon);
    } else if (id == "mmf-limit") {
      rep = check_mmf_limit(packed, epsilon);
    } else {
      raise(ErrorCode::invalid_argument,
            "unknown lemma '" + id +
                "' (expected lower-bound|lp-approx|near-one|mmf-limit)");
    }
    std::snprintf(out->lemma_id, sizeof(out->lemma_id), "%s", rep.lemma_id.c_str());
    std::snprintf(out->instance_hash, sizeof(out->instance_hash), "%s",
                  rep.instance_hash.c_str());
    out->claimed = rep.claimed;
    out->measured = rep.measured;
    out->margin = rep.margin;
    out->pass = rep.pass ? 1 : 0;
  });
}

af_status af_lemma_csv_header(char** out) {
  return guarded([&] {
    if (out == nullptr) raise(ErrorCode::invalid_argument, "null argument");
    *out = dup_string(lemma_csv_header());
  });
}

af_status af_lemma_csv_row(const af_lemma_result* r, char** out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    LemmaReport rep;
    rep.lemma_id = r->lemma_id;
    rep.instance_hash = r->instance_hash;
    rep.claimed = r->claimed;
    rep.measured = r->measured;
    rep.margin = r->margin;
    rep.pass = r->pass != 0;
    *out = dup_string(lemma_report_csv_row(rep));
  });
}

af_status af_sweep_run(const af_problem* p, const double* alphas, size_t n_alphas,
                       const double* epsilons, size_t n_epsilons,
                       const af_solve_options* options, unsigned jobs,
                       af_sweep_result** out) {
  return guarded([&] {
    if (p == nullptr || out == nullptr ||
        (alphas == nullptr && n_alphas > 0) ||
        (epsilons == nullptr && n_epsilons > 0))
      raise(ErrorCode::invalid_argument, "null argument");
    const RunOptions opt = to_run_options(options);
    auto r = new af_sweep_result;
    try {
      r->cells = sweep(p->raw, {alphas, alphas + n_alphas},
                       {epsilons, epsilons + n_epsilons}, opt.schedule,
                       opt.budget, jobs);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void af_sweep_result_free(af_sweep_result* r) { delete r; }

size_t af_sweep_result_rows(const af_sweep_result* r) {
  return r ? r->cells.size() : 0;
}

af_status af_sweep_result_csv(const af_sweep_result* r, char** out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    *out = dup_string(sweep_to_csv(r->cells));
  });
}

af_status af_sweep_result_write_csv(const af_sweep_result* r, const char* path) {
  return guarded([&] {
    if (r == nullptr || path == nullptr)
      raise(ErrorCode::invalid_argument, "null argument");
    atomic_write_file(path, sweep_to_csv(r->cells));
  });
}

}  // extern "C"
