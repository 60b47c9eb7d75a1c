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

#include "alphafair/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "alphafair/errors.hpp"
#include "alphafair/io.hpp"
#include "alphafair/log.hpp"
#include "alphafair/rng.hpp"

namespace alphafair {

using json = nlohmann::ordered_json;

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::reset_x: return "reset_x";
    case EventKind::scale_x: return "scale_x";
    case EventKind::add_constraint: return "add_constraint";
    case EventKind::remove_constraint: return "remove_constraint";
    case EventKind::set_weight: return "set_weight";
  }
  return "?";
}

namespace {

struct ProblemSetup {
  PackingProblem problem;
  Regime regime;
  SolverParams params;
  double epsilon_valid = 0.0;
};

ProblemSetup make_setup(const RawProblem& raw, double epsilon, EpsilonMode mode) {
  ProblemSetup s{PackingProblem::normalize(raw), {}, {}, 0.0};
  s.regime = dispatch_regime(raw.alpha, epsilon, s.problem, mode);
  if (s.regime.mode == RegimeMode::tiny_alpha_lp)
    raise(ErrorCode::lp_regime,
          "alpha = " + format_double(raw.alpha) +
              " is at or below the LP dispatch threshold; use the lp oracle");
  s.epsilon_valid = validate_epsilon(epsilon, s.regime.effective_alpha, mode);
  const double eps_run = s.regime.effective_alpha > 1.0
                             ? s.epsilon_valid / s.regime.effective_alpha
                             : s.epsilon_valid;
  s.params = derive(s.problem, eps_run, s.regime.effective_alpha);
  return s;
}

std::uint64_t default_budget(const SolverParams& params) {
  const double def = 50.0 * std::ceil(params.tau0 + params.tau1);
  return def > 9e18 ? std::numeric_limits<std::uint64_t>::max()
                    : static_cast<std::uint64_t>(def);
}

// Mutates the raw problem in place; throws Error(invalid_event) when the
// result would not be a valid packing problem.
void apply_event_to_raw(RawProblem& raw, const PerturbationEvent& ev) {
  switch (ev.kind) {
    case EventKind::reset_x:
    case EventKind::scale_x:
      return;  // allocation-only events
    case EventKind::add_constraint: {
      if (ev.row.empty())
        raise(ErrorCode::invalid_event, "add_constraint needs a nonempty row");
      if (!(ev.rhs > 0.0))
        raise(ErrorCode::invalid_event, "add_constraint rhs must be positive");
      for (const auto& [col, val] : ev.row) {
        if (col >= raw.n)
          raise(ErrorCode::invalid_event, "add_constraint column out of range");
        if (!(val > 0.0))
          raise(ErrorCode::invalid_event, "add_constraint coefficients must be positive");
        raw.entries.push_back(Entry{raw.m, col, val});
      }
      raw.b.push_back(ev.rhs);
      raw.m += 1;
      break;
    }
    case EventKind::remove_constraint: {
      if (ev.index >= raw.m)
        raise(ErrorCode::invalid_event, "remove_constraint index out of range");
      if (raw.m == 1)
        raise(ErrorCode::invalid_event, "cannot remove the last constraint");
      std::vector<Entry> kept;
      kept.reserve(raw.entries.size());
      for (const Entry& e : raw.entries) {
        if (e.row == ev.index) continue;
        Entry copy = e;
        if (copy.row > ev.index) copy.row -= 1;
        kept.push_back(copy);
      }
      raw.entries = std::move(kept);
      raw.b.erase(raw.b.begin() + static_cast<std::ptrdiff_t>(ev.index));
      raw.m -= 1;
      break;
    }
    case EventKind::set_weight: {
      if (ev.index >= raw.n)
        raise(ErrorCode::invalid_event, "set_weight index out of range");
      if (!(ev.weight > 0.0))
        raise(ErrorCode::invalid_event, "set_weight weight must be positive");
      raw.weights[ev.index] = ev.weight;
      break;
    }
  }
  try {
    raw.validate();
  } catch (const Error& e) {
    raise(ErrorCode::invalid_event,
          std::string("event leaves an invalid problem: ") + e.what());
  }
}

}  // namespace

ExperimentResult run(const RawProblem& raw0, const RunOptions& options) {
  Schedule sched = options.schedule;
  if (sched.mode == ScheduleMode::synchronous) {
    sched.q = 1.0;
  } else if (!(sched.q > 0.0) || sched.q > 1.0) {
    raise(ErrorCode::invalid_argument, "activation probability q must be in (0, 1]");
  }
  for (std::size_t k = 1; k < options.events.size(); ++k)
    if (options.events[k].at_round < options.events[k - 1].at_round)
      raise(ErrorCode::invalid_argument, "events must be sorted by round");

  RawProblem raw = raw0;
  ProblemSetup setup = make_setup(raw, options.epsilon, options.epsilon_mode);
  std::uint64_t budget =
      options.budget != 0 ? options.budget : default_budget(setup.params);

  SolverState state;
  if (options.start.has_value()) {
    if (options.start->size() != setup.problem.num_vars())
      raise(ErrorCode::invalid_argument, "start allocation length does not match n");
    state.reset(setup.problem, *options.start);
  } else {
    state.reset(setup.problem, setup.params.delta);
  }

  ExperimentResult result;
  result.report.params = setup.params;
  result.report.regime = setup.regime;
  result.report.epsilon_requested = setup.epsilon_valid;
  result.report.stop = StopReason::budget_exhausted;
  result.report.best_gap = std::numeric_limits<double>::quiet_NaN();

  Rng rng(sched.seed);
  std::vector<std::uint8_t> mask;
  const bool async = sched.mode == ScheduleMode::async_subset;

  std::size_t next_event = 0;
  std::uint64_t segment_start = 0;
  bool have_best = false;
  std::uint64_t rounds_executed = 0;

  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t r = 0;; ++r) {
    // Apply due events atomically before the round; params and normalization
    // follow the edited problem, the allocation is carried across through raw
    // coordinates.
    while (next_event < options.events.size() &&
           options.events[next_event].at_round <= r) {
      const PerturbationEvent& ev = options.events[next_event];
      result.checkpoints.emplace_back(r, state.x);
      if (ev.kind == EventKind::reset_x) {
        if (ev.x_values.size() != setup.problem.num_vars())
          raise(ErrorCode::invalid_event, "reset_x values length does not match n");
        for (double v : ev.x_values)
          if (!(v >= 0.0) || !std::isfinite(v))
            raise(ErrorCode::invalid_event, "reset_x values must be finite and >= 0");
        state.x = ev.x_values;
      } else if (ev.kind == EventKind::scale_x) {
        if (!(ev.factor > 0.0) || !std::isfinite(ev.factor))
          raise(ErrorCode::invalid_event, "scale_x factor must be positive");
        for (double& v : state.x) v *= ev.factor;
      } else {
        const double c_old = setup.problem.scale();
        std::vector<double> x_raw(state.x.size());
        for (std::size_t j = 0; j < state.x.size(); ++j)
          x_raw[j] = state.x[j] / c_old;
        apply_event_to_raw(raw, ev);
        setup = make_setup(raw, options.epsilon, options.epsilon_mode);
        const double c_new = setup.problem.scale();
        std::vector<double> x_new(x_raw.size());
        for (std::size_t j = 0; j < x_raw.size(); ++j)
          x_new[j] = x_raw[j] * c_new;
        const std::uint64_t keep_round = state.round;
        state.reset(setup.problem, x_new);
        state.round = keep_round;
        if (options.budget == 0) budget = default_budget(setup.params);
      }
      result.recoveries.push_back(
          RecoveryRecord{r, ev.kind, -1, -1});
      segment_start = r;
      have_best = false;  // gaps refer to the new problem
      result.report.params = setup.params;
      result.report.regime = setup.regime;
      result.report.best_gap = std::numeric_limits<double>::quiet_NaN();
      next_event++;
    }

    if (r - segment_start >= budget) break;

    const std::uint8_t* mask_ptr = nullptr;
    std::size_t mask_len = 0;
    if (async) {
      mask.resize(setup.problem.num_vars());
      for (std::size_t j = 0; j < mask.size(); ++j)
        mask[j] = rng.bernoulli(sched.q) ? 1 : 0;
      mask_ptr = mask.data();
      mask_len = mask.size();
    }

    const RoundRecord rec = round_update(setup.problem, setup.params, state,
                                         {mask_ptr, mask_len});
    rounds_executed = r + 1;
    if (options.observer) options.observer(rec, state);
    if (options.trace_every != 0 && r % options.trace_every == 0)
      result.trace.push_back(rec);

    if (!std::isnan(rec.gap) &&
        (!have_best || rec.gap < result.report.best_gap)) {
      have_best = true;
      result.report.best_gap = rec.gap;
      result.report.best_round = rec.round;
      result.report.best_objective = rec.objective;
      result.x_best = state.x_snapshot;
    }

    const bool stop_ok = stop_criterion(rec, setup.params, setup.epsilon_valid,
                                        setup.problem.weight_sum());
    for (RecoveryRecord& rr : result.recoveries) {
      if (rr.rounds_to_feasible < 0 && rec.max_violation <= 0.0)
        rr.rounds_to_feasible = static_cast<std::int64_t>(r - rr.event_round);
      if (rr.rounds_to_stop < 0 && stop_ok)
        rr.rounds_to_stop = static_cast<std::int64_t>(r - rr.event_round);
    }

    if (next_event >= options.events.size() && r + 1 >= options.min_rounds &&
        stop_ok) {
      result.report.stop = StopReason::gap_converged;
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();

  result.report.rounds_used = rounds_executed;
  result.x_final = state.x;
  result.checkpoints.emplace_back(rounds_executed, state.x);
  if (!have_best) result.x_best = state.x;
  result.wall_seconds_per_round =
      rounds_executed == 0
          ? 0.0
          : std::chrono::duration<double>(t1 - t0).count() /
                static_cast<double>(rounds_executed);
  if (log_enabled(LogLevel::info))
    log_msg(LogLevel::info,
            "run: " + std::string(stop_reason_name(result.report.stop)) + " after " +
                std::to_string(rounds_executed) + " rounds (" +
                format_double(result.wall_seconds_per_round * 1e6) + " us/round)");
  return result;
}

std::vector<SweepCell> sweep(const RawProblem& raw,
                             const std::vector<double>& alphas,
                             const std::vector<double>& epsilons,
                             const Schedule& schedule, std::uint64_t budget,
                             unsigned jobs) {
  std::vector<SweepCell> cells(alphas.size() * epsilons.size());
  if (cells.empty()) return cells;

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&]() {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= cells.size()) return;
      const double alpha = alphas[k / epsilons.size()];
      const double eps = epsilons[k % epsilons.size()];
      try {
        RawProblem cell_raw = raw;
        cell_raw.alpha = alpha;
        RunOptions opt;
        opt.epsilon = eps;
        opt.schedule = schedule;
        opt.budget = budget;
        opt.trace_every = 0;
        const ExperimentResult res = run(cell_raw, opt);
        SweepCell& cell = cells[k];
        cell.alpha = alpha;
        cell.epsilon = eps;
        cell.rounds_used = res.report.rounds_used;
        cell.best_gap = res.report.best_gap;
        cell.rounds_to_gap =
            res.report.stop == StopReason::gap_converged
                ? static_cast<std::int64_t>(res.report.rounds_used)
                : -1;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
  std::string out = "alpha,epsilon,rounds_to_gap,best_gap,rounds_used\n";
  for (const SweepCell& c : cells) {
    out += format_double(c.alpha);
    out += ',';
    out += format_double(c.epsilon);
    out += ',';
    out += std::to_string(c.rounds_to_gap);
    out += ',';
    out += format_double(c.best_gap);
    out += ',';
    out += std::to_string(c.rounds_used);
    out += '\n';
  }
  return out;
}

Scenario parse_scenario_json(const std::string& text, std::size_t n_vars) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    raise(ErrorCode::parse, "malformed scenario document");

  Scenario sc;
  if (doc.contains("schedule")) {
    const json& s = doc["schedule"];
    Schedule sched;
    if (s.contains("mode")) {
      const std::string mode = s["mode"].get<std::string>();
      if (mode == "sync" || mode == "synchronous")
        sched.mode = ScheduleMode::synchronous;
      else if (mode == "async" || mode == "async_subset")
        sched.mode = ScheduleMode::async_subset;
      else
        raise(ErrorCode::parse, "schedule mode must be sync or async");
    }
    if (s.contains("q")) sched.q = s["q"].get<double>();
    if (s.contains("seed")) sched.seed = s["seed"].get<std::uint64_t>();
    sc.schedule = sched;
  }
  if (doc.contains("budget")) sc.budget = doc["budget"].get<std::uint64_t>();
  if (doc.contains("events")) {
    if (!doc["events"].is_array())
      raise(ErrorCode::parse, "events must be an array");
    for (const json& e : doc["events"]) {
      PerturbationEvent ev;
      if (!e.contains("round") || !e.contains("kind"))
        raise(ErrorCode::parse, "each event needs 'round' and 'kind'");
      ev.at_round = e["round"].get<std::uint64_t>();
      const std::string kind = e["kind"].get<std::string>();
      if (kind == "reset_x") {
        ev.kind = EventKind::reset_x;
        if (!e.contains("values"))
          raise(ErrorCode::parse, "reset_x needs 'values'");
        if (e["values"].is_number()) {
          ev.x_values.assign(n_vars, e["values"].get<double>());
        } else if (e["values"].is_array()) {
          for (const auto& v : e["values"]) ev.x_values.push_back(v.get<double>());
        } else {
          raise(ErrorCode::parse, "reset_x values must be a number or an array");
        }
      } else if (kind == "scale_x") {
        ev.kind = EventKind::scale_x;
        if (!e.contains("factor")) raise(ErrorCode::parse, "scale_x needs 'factor'");
        ev.factor = e["factor"].get<double>();
      } else if (kind == "add_constraint") {
        ev.kind = EventKind::add_constraint;
        if (!e.contains("row") || !e["row"].is_array())
          raise(ErrorCode::parse, "add_constraint needs a 'row' array");
        for (const auto& pair : e["row"]) {
          if (!pair.is_array() || pair.size() != 2)
            raise(ErrorCode::parse, "row items must be [column, value] pairs");
          ev.row.emplace_back(pair[0].get<std::size_t>(), pair[1].get<double>());
        }
        if (e.contains("rhs")) ev.rhs = e["rhs"].get<double>();
      } else if (kind == "remove_constraint") {
        ev.kind = EventKind::remove_constraint;
        if (!e.contains("index"))
          raise(ErrorCode::parse, "remove_constraint needs 'index'");
        ev.index = e["index"].get<std::size_t>();
      } else if (kind == "set_weight") {
        ev.kind = EventKind::set_weight;
        if (!e.contains("index") || !e.contains("weight"))
          raise(ErrorCode::parse, "set_weight needs 'index' and 'weight'");
        ev.index = e["index"].get<std::size_t>();
        ev.weight = e["weight"].get<double>();
      } else {
        raise(ErrorCode::parse, "unknown event kind: " + kind);
      }
      sc.events.push_back(std::move(ev));
    }
  }
  return sc;
}

}  // namespace alphafair
