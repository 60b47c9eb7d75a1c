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

// Command-line front end. Everything below speaks to the shared library
// through the C API in alphafair.h; exit codes are 0 (success / converged /
// pass), 1 (input error), 2 (budget exhausted or failed check; outputs are
// still written).

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "alphafair.h"

namespace {

int fail(af_status status) {
  std::fprintf(stderr, "error: %s (%s)\n", af_last_error(), af_status_name(status));
  return 1;
}

int fail_msg(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return 1;
}

struct ProblemHandle {
  af_problem* p = nullptr;
  ~ProblemHandle() { af_problem_free(p); }
};

struct ResultHandle {
  af_result* r = nullptr;
  ~ResultHandle() { af_result_free(r); }
};

struct OracleHandle {
  af_oracle_result* r = nullptr;
  ~OracleHandle() { af_oracle_result_free(r); }
};

struct SweepHandle {
  af_sweep_result* r = nullptr;
  ~SweepHandle() { af_sweep_result_free(r); }
};

int load_problem(const std::string& path, double alpha_override, bool alpha_set,
                 ProblemHandle& out) {
  af_status st = af_problem_load(path.c_str(), &out.p);
  if (st != AF_OK) return fail(st);
  if (alpha_set) {
    st = af_problem_set_alpha(out.p, alpha_override);
    if (st != AF_OK) return fail(st);
  }
  return 0;
}

std::string read_text_file(const std::string& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ok = false;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  ok = in.good() || in.eof();
  return ss.str();
}

int print_json_string(af_status st, char* text) {
  if (st != AF_OK) return fail(st);
  if (text != nullptr) std::fputs(text, stdout);
  af_string_free(text);
  return 0;
}

int write_result_outputs(af_result* r, const std::string& trace_path,
                         const std::string& report_path) {
  if (!trace_path.empty()) {
    const af_status st = af_result_write_trace_csv(r, trace_path.c_str());
    if (st != AF_OK) return fail(st);
  }
  if (!report_path.empty()) {
    const af_status st = af_result_write_report_json(r, report_path.c_str());
    if (st != AF_OK) return fail(st);
  }
  char* alloc_json = nullptr;
  const af_status st = af_result_allocation_json(r, &alloc_json);
  if (int rc = print_json_string(st, alloc_json)) return rc;
  return af_result_converged(r) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted alpha-fair packing: stateless distributed solver, "
               "oracles, and structural checks"};
  app.require_subcommand(1);

  std::string problem_path, trace_path, report_path, events_path;
  std::string mode = "sync", method = "barrier", lemma;
  std::vector<double> alphas, epsilons;
  double alpha = 0.0, eps = 0.1, q = 0.5, tol = 1e-8;
  bool eps_clamp = false;
  std::uint64_t seed = 0, max_rounds = 0, min_rounds = 0;
  std::uint32_t trace_every = 1;
  unsigned jobs = 1;

  auto add_problem_flags = [&](CLI::App* cmd) {
    cmd->add_option("--problem", problem_path, "problem file (JSON)")->required();
    cmd->add_option("--alpha", alpha, "override the problem's alpha");
  };
  auto add_schedule_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "agent schedule: sync|async")
        ->check(CLI::IsMember({"sync", "async"}));
    cmd->add_option("--q", q, "activation probability (async mode)");
    cmd->add_option("--seed", seed, "schedule RNG seed");
  };
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--eps", eps, "approximation parameter")->required();
    cmd->add_flag("--eps-clamp", eps_clamp,
                  "clamp epsilon to the admissible range instead of rejecting");
    cmd->add_option("--max-rounds", max_rounds, "round budget (0: default)");
    cmd->add_option("--min-rounds", min_rounds, "never stop before this round");
    cmd->add_option("--trace", trace_path, "write the per-round trace CSV here");
    cmd->add_option("--trace-every", trace_every, "keep every K-th trace row");
    cmd->add_option("--report", report_path, "write the run report JSON here");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "run the distributed dynamics");
  add_problem_flags(solve_cmd);
  add_run_flags(solve_cmd);
  add_schedule_flags(solve_cmd);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "reference optimum from an independent method");
  add_problem_flags(oracle_cmd);
  oracle_cmd->add_option("--method", method, "barrier|closed-form|mmf|lp")
      ->check(CLI::IsMember({"barrier", "closed-form", "mmf", "lp"}));
  oracle_cmd->add_option("--tol", tol, "barrier tolerance");

  CLI::App* check_cmd =
      app.add_subcommand("check", "verify a structural result on this instance");
  add_problem_flags(check_cmd);
  check_cmd
      ->add_option("--lemma", lemma, "lower-bound|lp-approx|near-one|mmf-limit")
      ->required()
      ->check(CLI::IsMember({"lower-bound", "lp-approx", "near-one", "mmf-limit"}));
  check_cmd->add_option("--eps", eps, "approximation parameter for the check");

  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "run with mid-flight perturbation events");
  add_problem_flags(scenario_cmd);
  add_run_flags(scenario_cmd);
  add_schedule_flags(scenario_cmd);
  scenario_cmd->add_option("--events", events_path, "scenario document (JSON)")
      ->required();

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "solve over (alpha, epsilon) grids");
  sweep_cmd->add_option("--problem", problem_path, "problem file (JSON)")->required();
  sweep_cmd->add_option("--alpha", alphas, "alpha values (repeatable)");
  sweep_cmd->add_option("--eps", epsilons, "epsilon values (repeatable)");
  sweep_cmd->add_option("--max-rounds", max_rounds, "round budget per cell");
  sweep_cmd->add_option("--jobs", jobs, "parallel cells");
  sweep_cmd->add_option("--report", report_path, "summary CSV (stdout if absent)");
  add_schedule_flags(sweep_cmd);

  CLI11_PARSE(app, argc, argv);

  const bool alpha_set = app.count_all() && (solve_cmd->count("--alpha") ||
                                             oracle_cmd->count("--alpha") ||
                                             check_cmd->count("--alpha") ||
                                             scenario_cmd->count("--alpha"));
  const bool async = mode == "async";
  const bool q_given = solve_cmd->count("--q") || scenario_cmd->count("--q") ||
                       sweep_cmd->count("--q");
  if (q_given && !async)
    return fail_msg("--q is only valid with --mode async");
  if (async && !(q > 0.0 && q <= 1.0))
    return fail_msg("--q must be in (0, 1]");

  af_solve_options opt;
  af_solve_options_init(&opt);
  opt.epsilon = eps;
  opt.clamp_epsilon = eps_clamp ? 1 : 0;
  opt.async_mode = async ? 1 : 0;
  opt.q = async ? q : 1.0;
  opt.seed = seed;
  opt.max_rounds = max_rounds;
  opt.min_rounds = min_rounds;
  opt.trace_every = trace_every;

  if (solve_cmd->parsed()) {
    ProblemHandle p;
    if (int rc = load_problem(problem_path, alpha, alpha_set, p)) return rc;

    af_regime_info regime;
    af_status st = af_dispatch_regime(p.p, eps, opt.clamp_epsilon, &regime);
    if (st != AF_OK) return fail(st);
    if (regime.mode == 2) {
      // Below the LP dispatch threshold the LP optimum carries the guarantee.
      std::fprintf(stderr,
                   "note: alpha %g is at or below the LP dispatch threshold %g; "
                   "routing to the lp oracle\n",
                   af_problem_alpha(p.p), regime.tiny_threshold);
      OracleHandle o;
      st = af_oracle_solve(p.p, "lp", 0.0, &o.r);
      if (st != AF_OK) return fail(st);
      char* text = nullptr;
      const af_status jst = af_oracle_result_json(o.r, &text);
      return print_json_string(jst, text);
    }

    ResultHandle r;
    st = af_solve(p.p, &opt, &r.r);
    if (st != AF_OK) return fail(st);
    return write_result_outputs(r.r, trace_path, report_path);
  }

  if (oracle_cmd->parsed()) {
    ProblemHandle p;
    if (int rc = load_problem(problem_path, alpha, alpha_set, p)) return rc;
    OracleHandle o;
    const af_status st = af_oracle_solve(p.p, method.c_str(), tol, &o.r);
    if (st != AF_OK) return fail(st);
    char* text = nullptr;
    const af_status jst = af_oracle_result_json(o.r, &text);
    return print_json_string(jst, text);
  }

  if (check_cmd->parsed()) {
    ProblemHandle p;
    if (int rc = load_problem(problem_path, alpha, alpha_set, p)) return rc;
    af_lemma_result rep;
    const af_status st = af_check_lemma(p.p, lemma.c_str(), eps, &rep);
    if (st != AF_OK) return fail(st);
    char* header = nullptr;
    char* row = nullptr;
    if (af_lemma_csv_header(&header) != AF_OK || af_lemma_csv_row(&rep, &row) != AF_OK)
      return fail(AF_ERROR_INTERNAL);
    std::printf("%s\n%s\n", header, row);
    af_string_free(header);
    af_string_free(row);
    return rep.pass ? 0 : 2;
  }

  if (scenario_cmd->parsed()) {
    ProblemHandle p;
    if (int rc = load_problem(problem_path, alpha, alpha_set, p)) return rc;
    bool ok = true;
    const std::string scenario = read_text_file(events_path, ok);
    if (!ok) return fail_msg("cannot read events file: " + events_path);
    const bool use_scenario_schedule = scenario_cmd->count("--mode") == 0;
    ResultHandle r;
    const af_status st = af_run_scenario(p.p, &opt, scenario.c_str(),
                                         use_scenario_schedule ? 1 : 0, &r.r);
    if (st != AF_OK) return fail(st);
    return write_result_outputs(r.r, trace_path, report_path);
  }

  if (sweep_cmd->parsed()) {
    ProblemHandle p;
    if (int rc = load_problem(problem_path, 0.0, false, p)) return rc;
    SweepHandle s;
    const af_status st =
        af_sweep_run(p.p, alphas.data(), alphas.size(), epsilons.data(),
                     epsilons.size(), &opt, jobs, &s.r);
    if (st != AF_OK) return fail(st);
    if (report_path.empty()) {
      char* text = nullptr;
      const af_status jst = af_sweep_result_csv(s.r, &text);
      return print_json_string(jst, text);
    }
    const af_status wst = af_sweep_result_write_csv(s.r, report_path.c_str());
    if (wst != AF_OK) return fail(wst);
    return 0;
  }

  return fail_msg("no subcommand given");
}
