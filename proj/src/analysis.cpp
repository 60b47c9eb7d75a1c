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

#include "alphafair/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphafair/errors.hpp"
#include "alphafair/io.hpp"
#include "alphafair/solver.hpp"

namespace alphafair {

std::string lemma_csv_header() {
  return "lemma_id,instance_hash,claimed,measured,margin,pass";
}

std::string lemma_report_csv_row(const LemmaReport& r) {
  std::string out = r.lemma_id;
  out += ',';
  out += r.instance_hash;
  out += ',';
  out += format_double(r.claimed);
  out += ',';
  out += format_double(r.measured);
  out += ',';
  out += format_double(r.margin);
  out += ',';
  out += r.pass ? '1' : '0';
  return out;
}

std::vector<double> optimum_lower_bound(const PackingProblem& p, double alpha) {
  const std::size_t n = p.num_vars();
  const double m_cap = static_cast<double>(std::min(p.num_constraints(), n));
  const auto& w = p.weights();
  std::vector<double> bound(n);
  for (std::size_t j = 0; j < n; ++j) {
    double min_inv = std::numeric_limits<double>::infinity();
    auto rows = p.matrix().col_rows(j);
    auto vals = p.matrix().col_vals(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double n_i = static_cast<double>(p.row_nonzeros()[rows[k]]);
      min_inv = std::min(min_inv, 1.0 / (n_i * vals[k]));
    }
    const double base = w[j] / (p.weight_max() * m_cap);
    if (alpha <= 1.0)
      bound[j] = std::pow(base * min_inv, 1.0 / alpha);
    else
      bound[j] = std::pow(p.max_entry(), (1.0 - alpha) / alpha) *
                 std::pow(base, 1.0 / alpha) * min_inv;
  }
  return bound;
}

LemmaReport check_lower_bound(const PackingProblem& p, double alpha,
                              const OracleSolution& oracle) {
  if (!(oracle.kkt_residual <= 1e-6))
    raise(ErrorCode::invalid_argument,
          "lower-bound check needs an oracle optimum with kkt residual <= 1e-6");
  if (oracle.x.size() != p.num_vars())
    raise(ErrorCode::invalid_argument, "oracle solution does not match problem");

  const std::vector<double> bound = optimum_lower_bound(p, alpha);
  LemmaReport rep;
  rep.lemma_id = "lower-bound";
  rep.instance_hash = problem_hash(p.to_raw());
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    const double margin = oracle.x[j] - (1.0 - 1e-6) * bound[j];
    if (margin < worst_margin) {
      worst_margin = margin;
      worst = j;
    }
  }
  rep.claimed = bound[worst];
  rep.measured = oracle.x[worst];
  rep.margin = worst_margin;
  rep.pass = worst_margin >= 0.0;
  rep.detail = "alpha=" + format_double(alpha) +
               " worst_j=" + std::to_string(worst);
  return rep;
}

LemmaReport check_lp_approx(const PackingProblem& p, double epsilon) {
  const double n_amax = static_cast<double>(p.num_vars()) * p.max_entry();
  const double alpha = (epsilon / 4.0) / std::log(n_amax / epsilon);
  const LpSolution lp = lp_solve(p, p.weights());
  const OracleSolution fair = barrier_solve(p, alpha, 1e-9);

  double fair_value = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j)
    fair_value += p.weights()[j] * std::pow(fair.x[j], 1.0 - alpha) / (1.0 - alpha);

  LemmaReport rep;
  rep.lemma_id = "lp-approx";
  rep.instance_hash = problem_hash(p.to_raw());
  rep.claimed = (1.0 - 3.0 * epsilon) * fair_value;
  rep.measured = lp.value;
  rep.margin = rep.measured - rep.claimed;
  rep.pass = fair.converged && rep.margin >= -1e-9 * std::abs(rep.claimed);
  rep.detail = "alpha=" + format_double(alpha);
  return rep;
}

LemmaReport check_near_one_transfer(const PackingProblem& p, double epsilon) {
  RawProblem raw = p.to_raw();
  raw.alpha = 1.0;
  const PackingProblem p1 = PackingProblem::normalize(raw);

  SolveOptions opt;
  opt.epsilon = epsilon;
  opt.trace_every = 0;
  const SolveResult run = solve(p1, opt);

  LemmaReport rep;
  rep.lemma_id = "near-one";
  rep.instance_hash = problem_hash(p.to_raw());
  rep.claimed = 2.0 * epsilon;
  if (run.report.stop != StopReason::gap_converged) {
    rep.measured = std::numeric_limits<double>::quiet_NaN();
    rep.pass = false;
    rep.detail = "alpha=1 run did not certify an epsilon-approximate solution";
    return rep;
  }

  const double tau0 = run.report.params.tau0;
  double worst = 0.0;
  for (const double alpha_edge : {1.0 - 1.0 / tau0, 1.0 + 1.0 / tau0}) {
    const OracleSolution opt_edge = barrier_solve(p1, alpha_edge, 1e-9);
    const double p_x = p1.objective(run.x, alpha_edge);
    const double denom = alpha_edge < 1.0 ? p_x : -p_x;
    worst = std::max(worst, (opt_edge.objective - p_x) / denom);
  }
  rep.measured = worst;
  rep.margin = rep.claimed - rep.measured;
  rep.pass = rep.margin >= -1e-9;
  rep.detail = "window=" + format_double(1.0 / tau0);
  return rep;
}

LemmaReport check_mmf_limit(const PackingProblem& p, double epsilon) {
  const double alpha = std::log(p.weight_ratio() *
                                static_cast<double>(p.num_vars()) * p.max_entry()) /
                       epsilon;
  if (!(alpha > 1.0))
    raise(ErrorCode::invalid_argument,
          "max-min threshold alpha is not above 1 on this instance");
  if (alpha > 80.0)
    raise(ErrorCode::float_range,
          "max-min threshold alpha " + format_double(alpha) +
          " exceeds the float-range guard (80); use a larger epsilon or a "
          "smaller instance");

  const std::vector<double> z = max_min_fair(p);
  const OracleSolution fair = barrier_solve(p, alpha, 1e-9);

  LemmaReport rep;
  rep.lemma_id = "mmf-limit";
  rep.instance_hash = problem_hash(p.to_raw());
  rep.claimed = epsilon;
  double worst = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j)
    worst = std::max(worst, std::abs(fair.x[j] / z[j] - 1.0));
  rep.measured = worst;
  rep.margin = rep.claimed - rep.measured;

  // Objective side, in the gap form that keeps both sides nonnegative for
  // alpha > 1: p_alpha(x*) - p_alpha(z*) <= eps (alpha - 1) (-p_alpha(z*)).
  const double p_z = p.objective(z, alpha);
  const double p_x = fair.objective;
  const bool objective_ok = (p_x - p_z) <= epsilon * (alpha - 1.0) * (-p_z) + 1e-9;

  rep.pass = fair.converged && rep.margin >= -1e-6 && objective_ok;
  rep.detail = "alpha=" + format_double(alpha) +
               " objective_gap=" + format_double(p_x - p_z) +
               " objective_bound=" + format_double(epsilon * (alpha - 1.0) * (-p_z));
  return rep;
}

}  // namespace alphafair
