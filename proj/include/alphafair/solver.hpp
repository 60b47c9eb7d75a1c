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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alphafair/model.hpp"
#include "alphafair/params.hpp"

namespace alphafair {

enum class RegimeMode { general, near_one, tiny_alpha_lp };

struct Regime {
  RegimeMode mode = RegimeMode::general;
  double effective_alpha = 1.0;
  double tiny_threshold = 0.0;   // alpha at or below this routes to the LP oracle
  double near_one_window = 0.0;  // 1/tau0 computed at alpha = 1
};

/// Routes extreme alpha: at or below (eps/4)/ln(n A_max / eps) the LP oracle
/// carries the guarantee, within 1/tau0 of 1 the alpha = 1 dynamics do.
Regime dispatch_regime(double alpha, double epsilon, const PackingProblem& problem,
                       EpsilonMode mode = EpsilonMode::reject);

const char* regime_mode_name(RegimeMode mode);

/// y_i = C exp(kappa (activity_i - 1)), evaluated as exp(log C + ...) so a
/// huge C with a slack constraint cannot overflow. Activities above 1 may
/// saturate the dual to +inf, which keeps the decrease branch engaged.
std::vector<double> compute_duals(const PackingProblem& problem,
                                  const SolverParams& params,
                                  std::span<const double> x);
void compute_duals_from_activity(const SolverParams& params,
                                 std::span<const double> activity,
                                 std::span<double> y_out);

/// xi_j = x_j^alpha (sum_i y_i A_ij) / w_j.
std::vector<double> kkt_ratio(const PackingProblem& problem,
                              const SolverParams& params,
                              std::span<const double> x,
                              std::span<const double> y);

/// Phi(x) = p_alpha(x) - (1/kappa) sum_i y_i(x), duals recomputed from x.
double potential(const PackingProblem& problem, const SolverParams& params,
                 std::span<const double> x);

/// Duality gap G_alpha(x, y) for primal-feasible x and nonnegative y.
/// Throws Error(invalid_argument) with "infeasible x" when
/// max_violation(x) > 1e-9 and "nonpositive dual" when some y_i < 0.
double duality_gap(const PackingProblem& problem, std::span<const double> x,
                   std::span<const double> y, double alpha);

enum class Stationary { pre_tau, stationary, nonstationary };
const char* stationary_name(Stationary s);

struct RoundRecord {
  std::uint64_t round = 0;
  double objective = 0.0;      // at the post-clamp snapshot, effective alpha
  double potential = 0.0;
  double gap = 0.0;            // NaN while the snapshot is infeasible
  double gap_pre_clamp = 0.0;  // same quantity at the pre-clamp iterate
  double max_violation = 0.0;
  std::uint32_t n_inc = 0;     // |S+|
  std::uint32_t n_dec = 0;     // |S-|
  std::uint32_t n_clamped = 0; // decreases stopped at delta_j
  Stationary stationary = Stationary::pre_tau;
  bool acs1 = false, acs2 = false, acs3 = false;
};

struct SolverState {
  std::vector<double> x;            // current allocation (post-commit)
  std::vector<double> x_snapshot;   // post-clamp x the last round acted on
  std::vector<double> activity;     // row activity at the snapshot
  std::vector<double> y;            // duals at the snapshot
  std::vector<double> col_price;    // S_j = sum_i y_i A_ij at the snapshot
  std::vector<double> xi;           // KKT ratios at the snapshot
  std::vector<std::uint8_t> increased, decreased;  // S+ / S- membership
  std::uint64_t round = 0;

  void reset(const PackingProblem& problem, std::span<const double> start);
};

/// Inputs classify_stationary needs beyond the problem and params.
struct StationaryContext {
  std::uint64_t round = 0;
  std::span<const double> x;          // pre-update (post-clamp) allocation
  std::span<const double> col_price;  // sum_i y_i A_ij per agent
  std::span<const std::uint8_t> increased;
  std::span<const std::uint8_t> decreased;
};

/// Regime-appropriate two-condition test; rounds before ceil(tau0 + tau1)
/// are labeled pre_tau.
Stationary classify_stationary(const PackingProblem& problem,
                               const SolverParams& params,
                               const StationaryContext& ctx);

/// One synchronous round: clamp into [delta_j, 1], recompute duals, compare
/// every KKT ratio against (1 -+ gamma) on the same snapshot, commit the
/// multiplicative updates. A nonempty mask restricts clamping and updates to
/// active agents; duals are still computed globally.
RoundRecord round_update(const PackingProblem& problem, const SolverParams& params,
                         SolverState& state,
                         std::span<const std::uint8_t> mask = {});

enum class StopReason { gap_converged, budget_exhausted };
const char* stop_reason_name(StopReason r);

struct SolveOptions {
  double epsilon = 0.1;
  EpsilonMode epsilon_mode = EpsilonMode::reject;
  std::optional<std::vector<double>> start;  // normalized coordinates
  std::uint64_t max_rounds = 0;              // 0: 50 * ceil(tau0 + tau1)
  std::uint64_t min_rounds = 0;              // never stop before this round
  std::uint32_t trace_every = 1;
  // Called for every round, before subsampling. state.x_snapshot holds the
  // allocation the record describes.
  std::function<void(const RoundRecord&, const SolverState&)> observer;
};

struct SolveReport {
  SolverParams params;
  Regime regime;
  double epsilon_requested = 0.0;
  StopReason stop = StopReason::budget_exhausted;
  std::uint64_t rounds_used = 0;
  std::uint64_t best_round = 0;
  double best_gap = 0.0;
  double best_objective = 0.0;
};

struct SolveResult {
  std::vector<double> x;           // best-gap allocation seen (normalized)
  std::vector<RoundRecord> trace;  // one row per trace_every rounds
  SolveReport report;
};

/// Iterates round_update from the configured start (default x_j = delta_j)
/// until the certified duality gap meets the regime's stop test or the budget
/// runs out. Budget exhaustion is reported, not thrown. A tiny-alpha problem
/// throws Error(lp_regime); callers route those to the LP oracle.
SolveResult solve(const PackingProblem& problem, const SolveOptions& options);

/// Stop test shared by solve and the experiment harness: certified gap at or
/// below eps * W for effective alpha 1, eps * |p_alpha(x)| otherwise.
bool stop_criterion(const RoundRecord& rec, const SolverParams& params,
                    double epsilon, double weight_sum);

}  // namespace alphafair
