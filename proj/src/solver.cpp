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

#include "alphafair/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphafair/errors.hpp"
#include "alphafair/io.hpp"
#include "alphafair/log.hpp"

namespace alphafair {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilityTol = 1e-9;

double pow_alpha(double x, double alpha) {
  return alpha == 1.0 ? x : std::pow(x, alpha);
}

// x^(1-alpha) reusing an already computed x^alpha.
double pow_one_minus_alpha(double x, double x_pow_alpha, double alpha) {
  if (x > 0.0) return x / x_pow_alpha;
  return alpha < 1.0 ? 0.0 : kInf;
}

struct StationarySums {
  double total_wx1ma = 0.0;    // sum_j w_j x_j^(1-alpha)
  double price_mass = 0.0;     // sum_j x_j sum_i y_i A_ij
  double dec_wx1ma = 0.0;      // the first sum over S-
  double inc_w = 0.0;          // sum of weights over S+
  double active_price = 0.0;   // price mass over S+ union S-
};

Stationary classify_from_sums(const SolverParams& params, std::uint64_t round,
                              double weight_sum, const StationarySums& s) {
  const double tau_total = std::ceil(params.tau0 + params.tau1);
  if (static_cast<double>(round) < tau_total) return Stationary::pre_tau;

  const double g = params.gamma;
  const double alpha = params.alpha_effective;
  bool cond1, cond2;
  if (alpha == 1.0) {
    cond1 = s.inc_w <= weight_sum / params.tau0;
    cond2 = (1.0 - 2.0 * g) * weight_sum <= s.price_mass &&
            s.price_mass <= (1.0 + 2.0 * g) * weight_sum;
  } else if (alpha < 1.0) {
    cond1 = s.dec_wx1ma <= g * s.total_wx1ma;
    cond2 = s.price_mass <= (1.0 + 1.25 * g) * s.total_wx1ma;
  } else {
    cond1 = s.active_price <= g * s.total_wx1ma;
    cond2 = (1.0 - 2.0 * g) * s.total_wx1ma <= s.price_mass;
  }
  return cond1 && cond2 ? Stationary::stationary : Stationary::nonstationary;
}

// Gap from pieces the round loop already has. xi must be finite positive.
double gap_from_parts(const PackingProblem& p, double alpha,
                      std::span<const double> x, std::span<const double> xi,
                      std::span<const double> x_pow, double sum_y) {
  const auto& w = p.weights();
  const std::size_t n = p.num_vars();
  double acc = 0.0;
  if (alpha == 1.0) {
    for (std::size_t j = 0; j < n; ++j) acc -= w[j] * std::log(xi[j]);
    return acc + sum_y - p.weight_sum();
  }
  const double e = (alpha - 1.0) / alpha;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = std::exp(e * std::log(xi[j]));
    const double x1ma = pow_one_minus_alpha(x[j], x_pow[j], alpha);
    acc += w[j] * x1ma * ((t - 1.0) / (1.0 - alpha) - t);
  }
  return acc + sum_y;
}

}  // namespace

const char* regime_mode_name(RegimeMode mode) {
  switch (mode) {
    case RegimeMode::general: return "general";
    case RegimeMode::near_one: return "near_one";
    case RegimeMode::tiny_alpha_lp: return "tiny_alpha_lp";
  }
  return "?";
}

const char* stationary_name(Stationary s) {
  switch (s) {
    case Stationary::pre_tau: return "pre-tau";
    case Stationary::stationary: return "stationary";
    case Stationary::nonstationary: return "nonstationary";
  }
  return "?";
}

const char* stop_reason_name(StopReason r) {
  return r == StopReason::gap_converged ? "gap_converged" : "budget_exhausted";
}

Regime dispatch_regime(double alpha, double epsilon, const PackingProblem& problem,
                       EpsilonMode mode) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    raise(ErrorCode::invalid_argument, "alpha must be a positive finite real");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    raise(ErrorCode::epsilon_range, "epsilon must be a positive finite real");
  (void)mode;  // range enforcement happens when the final regime is known

  // A capped epsilon for the dispatch thresholds themselves.
  const double eps_d = std::min(epsilon, 1.0 / 6.0);

  Regime r;
  r.tiny_threshold =
      (eps_d / 4.0) /
      std::log(static_cast<double>(problem.num_vars()) * problem.max_entry() / eps_d);
  if (alpha <= r.tiny_threshold) {
    r.mode = RegimeMode::tiny_alpha_lp;
    r.effective_alpha = alpha;
    return r;
  }

  const SolverParams at_one = derive(problem, eps_d, 1.0);
  r.near_one_window = 1.0 / at_one.tau0;
  if (alpha != 1.0 && std::abs(alpha - 1.0) <= r.near_one_window) {
    r.mode = RegimeMode::near_one;
    r.effective_alpha = 1.0;
    return r;
  }

  r.mode = RegimeMode::general;
  r.effective_alpha = alpha;
  return r;
}

void compute_duals_from_activity(const SolverParams& params,
                                 std::span<const double> activity,
                                 std::span<double> y_out) {
  for (std::size_t i = 0; i < activity.size(); ++i)
    y_out[i] = std::exp(params.log_C + params.kappa * (activity[i] - 1.0));
}

std::vector<double> compute_duals(const PackingProblem& problem,
                                  const SolverParams& params,
                                  std::span<const double> x) {
  for (double v : x)
    if (v < 0.0) raise(ErrorCode::invalid_argument, "negative allocation");
  std::vector<double> y(problem.num_constraints());
  const std::vector<double> act = problem.row_activity(x);
  compute_duals_from_activity(params, act, y);
  return y;
}

std::vector<double> kkt_ratio(const PackingProblem& problem,
                              const SolverParams& params,
                              std::span<const double> x,
                              std::span<const double> y) {
  const std::size_t n = problem.num_vars();
  if (x.size() != n || y.size() != problem.num_constraints())
    raise(ErrorCode::invalid_argument, "dimension mismatch");
  std::vector<double> xi(n);
  const auto& a = problem.matrix();
  for (std::size_t j = 0; j < n; ++j) {
    auto rows = a.col_rows(j);
    auto vals = a.col_vals(j);
    double price = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) price += y[rows[k]] * vals[k];
    xi[j] = pow_alpha(x[j], params.alpha_effective) * price / problem.weights()[j];
  }
  return xi;
}

double potential(const PackingProblem& problem, const SolverParams& params,
                 std::span<const double> x) {
  const std::vector<double> y = compute_duals(problem, params, x);
  double sum_y = 0.0;
  for (double v : y) sum_y += v;
  return problem.objective(x, params.alpha_effective) - sum_y / params.kappa;
}

double duality_gap(const PackingProblem& problem, std::span<const double> x,
                   std::span<const double> y, double alpha) {
  if (x.size() != problem.num_vars() || y.size() != problem.num_constraints())
    raise(ErrorCode::invalid_argument, "dimension mismatch");
  if (problem.max_violation(x) > kFeasibilityTol)
    raise(ErrorCode::invalid_argument, "infeasible x");
  for (double v : y)
    if (v < 0.0) raise(ErrorCode::invalid_argument, "nonpositive dual");

  const std::size_t n = problem.num_vars();
  const auto& a = problem.matrix();
  const auto& w = problem.weights();
  double sum_y = 0.0;
  for (double v : y) sum_y += v;

  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(x[j] > 0.0))
      raise(ErrorCode::invalid_argument, "duality gap requires x > 0");
    auto rows = a.col_rows(j);
    auto vals = a.col_vals(j);
    double price = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) price += y[rows[k]] * vals[k];
    const double xi = pow_alpha(x[j], alpha) * price / w[j];
    if (alpha == 1.0) {
      acc -= w[j] * std::log(xi);
    } else {
      const double t = std::exp((alpha - 1.0) / alpha * std::log(xi));
      const double x1ma = std::pow(x[j], 1.0 - alpha);
      acc += w[j] * x1ma * ((t - 1.0) / (1.0 - alpha) - t);
    }
  }
  if (alpha == 1.0) return acc + sum_y - problem.weight_sum();
  return acc + sum_y;
}

Stationary classify_stationary(const PackingProblem& problem,
                               const SolverParams& params,
                               const StationaryContext& ctx) {
  const std::size_t n = problem.num_vars();
  const double alpha = params.alpha_effective;
  const auto& w = problem.weights();
  StationarySums s;
  for (std::size_t j = 0; j < n; ++j) {
    const double xp = pow_alpha(ctx.x[j], alpha);
    const double x1ma = pow_one_minus_alpha(ctx.x[j], xp, alpha);
    const double price = ctx.x[j] > 0.0 ? ctx.x[j] * ctx.col_price[j] : 0.0;
    s.total_wx1ma += w[j] * x1ma;
    s.price_mass += price;
    if (ctx.increased[j]) s.inc_w += w[j];
    if (ctx.decreased[j]) s.dec_wx1ma += w[j] * x1ma;
    if (ctx.increased[j] || ctx.decreased[j]) s.active_price += price;
  }
  return classify_from_sums(params, ctx.round, problem.weight_sum(), s);
}

void SolverState::reset(const PackingProblem& problem, std::span<const double> start) {
  const std::size_t n = problem.num_vars();
  const std::size_t m = problem.num_constraints();
  x.assign(start.begin(), start.end());
  x_snapshot.assign(n, 0.0);
  activity.assign(m, 0.0);
  y.assign(m, 0.0);
  col_price.assign(n, 0.0);
  xi.assign(n, 0.0);
  increased.assign(n, 0);
  decreased.assign(n, 0);
  round = 0;
}

RoundRecord round_update(const PackingProblem& problem, const SolverParams& params,
                         SolverState& state, std::span<const std::uint8_t> mask) {
  const std::size_t n = problem.num_vars();
  const std::size_t m = problem.num_constraints();
  if (state.x.size() != n)
    raise(ErrorCode::invalid_argument, "solver state does not match problem");
  if (!mask.empty() && mask.size() != n)
    raise(ErrorCode::invalid_argument, "activation mask length does not match n");
  const double alpha = params.alpha_effective;
  const auto& w = problem.weights();
  const auto& a = problem.matrix();

  auto active = [&](std::size_t j) { return mask.empty() || mask[j] != 0; };

  // Line 1: clamp into [delta_j, 1] (active agents).
  bool clamped_any = false;
  static thread_local std::vector<double> pre_clamp;
  pre_clamp.assign(state.x.begin(), state.x.end());
  for (std::size_t j = 0; j < n; ++j) {
    if (!active(j)) continue;
    const double c = std::min(std::max(state.x[j], params.delta[j]), 1.0);
    if (c != state.x[j]) {
      state.x[j] = c;
      clamped_any = true;
    }
  }
  state.x_snapshot.assign(state.x.begin(), state.x.end());

  // Line 2: duals from the clamped snapshot, then per-agent prices.
  problem.row_activity(state.x, state.activity);
  compute_duals_from_activity(params, state.activity, state.y);
  double sum_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum_y += state.y[i];
  for (std::size_t j = 0; j < n; ++j) {
    auto rows = a.col_rows(j);
    auto vals = a.col_vals(j);
    double price = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      price += state.y[rows[k]] * vals[k];
    state.col_price[j] = price;
  }

  static thread_local std::vector<double> x_pow;
  x_pow.resize(n);
  double objective = 0.0;
  StationarySums sums;
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = state.x[j];
    x_pow[j] = pow_alpha(xj, alpha);
    state.xi[j] = x_pow[j] * state.col_price[j] / w[j];
    const double x1ma = pow_one_minus_alpha(xj, x_pow[j], alpha);
    objective += alpha == 1.0 ? w[j] * std::log(xj)
                              : w[j] * x1ma / (1.0 - alpha);
    sums.total_wx1ma += w[j] * x1ma;
    sums.price_mass += xj > 0.0 ? xj * state.col_price[j] : 0.0;
  }

  RoundRecord rec;
  rec.round = state.round;
  rec.objective = objective;
  rec.potential = objective - sum_y / params.kappa;
  double max_act = -kInf;
  for (std::size_t i = 0; i < m; ++i) max_act = std::max(max_act, state.activity[i]);
  rec.max_violation = max_act - 1.0;

  const bool gap_ok = rec.max_violation <= kFeasibilityTol;
  rec.gap = gap_ok ? gap_from_parts(problem, alpha, state.x, state.xi, x_pow, sum_y)
                   : kNaN;
  if (!clamped_any) {
    rec.gap_pre_clamp = rec.gap;
  } else if (problem.max_violation(pre_clamp) <= kFeasibilityTol &&
             std::all_of(pre_clamp.begin(), pre_clamp.end(),
                         [](double v) { return v > 0.0; })) {
    const std::vector<double> y0 = compute_duals(problem, params, pre_clamp);
    rec.gap_pre_clamp = duality_gap(problem, pre_clamp, y0, alpha);
  } else {
    rec.gap_pre_clamp = kNaN;
  }

  const double eps = params.epsilon;
  rec.acs1 = max_act >= 1.0 - (1.0 + 1.0 / params.kappa) * eps - 1e-12;
  rec.acs2 = sum_y <= (1.0 + 3.0 * eps) * sums.price_mass * (1.0 + 1e-12);
  rec.acs3 = (1.0 - 3.0 * eps) * sum_y <= sums.price_mass * (1.0 + 1e-12) &&
             sums.price_mass <= sum_y * (1.0 + 1e-12);

  // Lines 3-8: multiplicative updates against the shared snapshot.
  const double lo = 1.0 - params.gamma;
  const double hi = 1.0 + params.gamma;
  for (std::size_t j = 0; j < n; ++j) {
    state.increased[j] = 0;
    state.decreased[j] = 0;
    if (!active(j)) continue;
    const double xj = state.x_snapshot[j];
    const double xi_j = state.xi[j];
    if (xi_j <= lo) {
      state.x[j] = xj * (1.0 + params.beta1);
      state.increased[j] = 1;
      rec.n_inc++;
    } else if (xi_j >= hi) {
      const double cand = xj * (1.0 - params.beta2);
      if (cand < params.delta[j]) {
        state.x[j] = params.delta[j];
        rec.n_clamped++;
      } else {
        state.x[j] = cand;
      }
      if (state.x[j] < xj) {
        state.decreased[j] = 1;
        rec.n_dec++;
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (state.increased[j]) sums.inc_w += w[j];
    if (state.decreased[j])
      sums.dec_wx1ma +=
          w[j] * pow_one_minus_alpha(state.x_snapshot[j], x_pow[j], alpha);
    if (state.increased[j] || state.decreased[j])
      sums.active_price += state.x_snapshot[j] * state.col_price[j];
  }
  rec.stationary =
      classify_from_sums(params, state.round, problem.weight_sum(), sums);

  state.round++;
  return rec;
}

bool stop_criterion(const RoundRecord& rec, const SolverParams& params,
                    double epsilon, double weight_sum) {
  if (std::isnan(rec.gap)) return false;
  if (params.alpha_effective == 1.0) return rec.gap <= epsilon * weight_sum;
  return rec.gap <= epsilon * std::abs(rec.objective);
}

SolveResult solve(const PackingProblem& problem, const SolveOptions& options) {
  const Regime regime =
      dispatch_regime(problem.alpha(), options.epsilon, problem, options.epsilon_mode);
  if (regime.mode == RegimeMode::tiny_alpha_lp)
    raise(ErrorCode::lp_regime,
          "alpha = " + format_double(problem.alpha()) +
              " is at or below the LP dispatch threshold " +
              format_double(regime.tiny_threshold) + "; solve via the lp oracle");

  const double eps = validate_epsilon(options.epsilon, regime.effective_alpha,
                                      options.epsilon_mode);
  // Internal approximation parameter: the convergence guarantees carry an
  // alpha-dependent constant for alpha > 1, so the dynamics run at eps/alpha
  // there; the stop test below stays at the caller's eps.
  const double eps_run =
      regime.effective_alpha > 1.0 ? eps / regime.effective_alpha : eps;
  const SolverParams params = derive(problem, eps_run, regime.effective_alpha);

  const std::size_t n = problem.num_vars();
  std::vector<double> start;
  if (options.start.has_value()) {
    if (options.start->size() != n)
      raise(ErrorCode::invalid_argument, "start allocation length does not match n");
    for (double v : *options.start)
      if (!(v >= 0.0) || !std::isfinite(v))
        raise(ErrorCode::invalid_argument, "start allocation must be finite and >= 0");
    start = *options.start;
  } else {
    start = params.delta;
  }

  std::uint64_t budget = options.max_rounds;
  if (budget == 0) {
    const double def = 50.0 * std::ceil(params.tau0 + params.tau1);
    budget = def > 9e18 ? std::numeric_limits<std::uint64_t>::max()
                        : static_cast<std::uint64_t>(def);
  }

  SolverState state;
  state.reset(problem, start);

  SolveResult result;
  result.report.params = params;
  result.report.regime = regime;
  result.report.epsilon_requested = eps;
  result.report.stop = StopReason::budget_exhausted;
  result.report.best_gap = kNaN;

  const double w_sum = problem.weight_sum();
  bool have_best = false;
  for (std::uint64_t r = 0; r < budget; ++r) {
    const RoundRecord rec = round_update(problem, params, state);
    if (options.observer) options.observer(rec, state);
    if (options.trace_every != 0 && r % options.trace_every == 0)
      result.trace.push_back(rec);
    if (!std::isnan(rec.gap) && (!have_best || rec.gap < result.report.best_gap)) {
      have_best = true;
      result.report.best_gap = rec.gap;
      result.report.best_round = rec.round;
      result.report.best_objective = rec.objective;
      result.x = state.x_snapshot;
    }
    if (r + 1 >= options.min_rounds && stop_criterion(rec, params, eps, w_sum)) {
      result.report.stop = StopReason::gap_converged;
      result.report.rounds_used = r + 1;
      break;
    }
    result.report.rounds_used = r + 1;
  }
  if (!have_best) {
    result.x = state.x_snapshot;
    result.report.best_round = state.round == 0 ? 0 : state.round - 1;
  }
  if (log_enabled(LogLevel::info))
    log_msg(LogLevel::info,
            "solve: " + std::string(stop_reason_name(result.report.stop)) +
                " after " + std::to_string(result.report.rounds_used) +
                " rounds, best gap " + format_double(result.report.best_gap) +
                " at round " + std::to_string(result.report.best_round));
  return result;
}

}  // namespace alphafair
