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
#include <string>
#include <vector>

#include "alphafair/model.hpp"
#include "alphafair/solver.hpp"

namespace alphafair {

enum class ScheduleMode { synchronous, async_subset };

/// Agent activation schedule. In async_subset mode each agent independently
/// updates each round with probability q; duals are observed globally either
/// way. q is forced to 1 in synchronous mode.
struct Schedule {
  ScheduleMode mode = ScheduleMode::synchronous;
  double q = 1.0;
  std::uint64_t seed = 0;
};

enum class EventKind { reset_x, scale_x, add_constraint, remove_constraint, set_weight };
const char* event_kind_name(EventKind k);

struct PerturbationEvent {
  std::uint64_t at_round = 0;
  EventKind kind = EventKind::reset_x;
  std::vector<double> x_values;                     // reset_x (normalized coords)
  double factor = 1.0;                              // scale_x
  std::vector<std::pair<std::size_t, double>> row;  // add_constraint (raw coefficients)
  double rhs = 1.0;                                 // add_constraint right-hand side
  std::size_t index = 0;                            // remove_constraint / set_weight
  double weight = 1.0;                              // set_weight
};

struct RecoveryRecord {
  std::uint64_t event_round = 0;
  EventKind kind = EventKind::reset_x;
  // Rounds from the event to the first round starting feasible, and to the
  // first round meeting the stop criterion again. -1 if not reached.
  std::int64_t rounds_to_feasible = -1;
  std::int64_t rounds_to_stop = -1;
};

struct RunOptions {
  double epsilon = 0.1;
  EpsilonMode epsilon_mode = EpsilonMode::reject;
  Schedule schedule;
  std::vector<PerturbationEvent> events;  // sorted by at_round
  std::uint64_t budget = 0;               // per-segment round budget; 0: solve default
  std::uint64_t min_rounds = 0;
  std::uint32_t trace_every = 1;
  std::optional<std::vector<double>> start;
  std::function<void(const RoundRecord&, const SolverState&)> observer;
};

struct ExperimentResult {
  std::vector<RoundRecord> trace;
  std::vector<std::pair<std::uint64_t, std::vector<double>>> checkpoints;
  std::vector<RecoveryRecord> recoveries;
  SolveReport report;             // of the final problem segment
  std::vector<double> x_final;    // allocation after the last round
  std::vector<double> x_best;     // best-gap allocation in the final segment
  double wall_seconds_per_round = 0.0;
};

/// Drives round_update under the schedule, applying events atomically between
/// rounds. Structural edits re-normalize the problem and re-derive the
/// parameters; the allocation is carried over through raw coordinates rather
/// than reset. Invalid edits (for example removing a row that leaves a
/// variable unconstrained) throw Error(invalid_event).
ExperimentResult run(const RawProblem& raw, const RunOptions& options);

struct SweepCell {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::int64_t rounds_to_gap = -1;  // -1: stop criterion not reached
  double best_gap = 0.0;
  std::uint64_t rounds_used = 0;
};

/// One solve per (alpha, epsilon) pair; rows ordered by the input lists.
/// Cells run on up to `jobs` threads; results are deterministic under a fixed
/// seed regardless of jobs.
std::vector<SweepCell> sweep(const RawProblem& raw,
                             const std::vector<double>& alphas,
                             const std::vector<double>& epsilons,
                             const Schedule& schedule,
                             std::uint64_t budget = 0,
                             unsigned jobs = 1);

std::string sweep_to_csv(const std::vector<SweepCell>& cells);

/// Scenario document: {"schedule": {...}, "budget": N, "events": [...]}.
struct Scenario {
  std::optional<Schedule> schedule;
  std::optional<std::uint64_t> budget;
  std::vector<PerturbationEvent> events;
};

Scenario parse_scenario_json(const std::string& text, std::size_t n_vars);

}  // namespace alphafair
