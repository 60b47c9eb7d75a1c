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

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace alphafair::testing {

RawProblem random_instance(Rng& rng, const InstanceSpec& spec) {
  RawProblem raw;
  raw.n = spec.n_min + rng.index(spec.n_max - spec.n_min + 1);
  raw.m = spec.m_min + rng.index(spec.m_max - spec.m_min + 1);
  raw.alpha = spec.alpha;
  raw.weights.resize(raw.n);
  for (double& w : raw.weights) w = rng.uniform(spec.weight_min, spec.weight_max);
  raw.b.resize(raw.m);
  for (double& b : raw.b) b = spec.unit_rhs ? 1.0 : rng.uniform(0.5, 4.0);

  std::vector<std::vector<std::uint8_t>> used(raw.m,
                                              std::vector<std::uint8_t>(raw.n, 0));
  auto add = [&](std::size_t i, std::size_t j) {
    if (used[i][j]) return;
    used[i][j] = 1;
    raw.entries.push_back(Entry{i, j, rng.uniform(spec.entry_min, spec.entry_max)});
  };
  for (std::size_t j = 0; j < raw.n; ++j) add(rng.index(raw.m), j);
  for (std::size_t i = 0; i < raw.m; ++i) add(i, rng.index(raw.n));
  for (std::size_t i = 0; i < raw.m; ++i)
    for (std::size_t j = 0; j < raw.n; ++j)
      if (rng.bernoulli(spec.density)) add(i, j);
  raw.validate();
  return raw;
}

RawProblem single_constraint_instance(std::vector<double> weights,
                                      std::vector<double> row, double alpha) {
  RawProblem raw;
  raw.n = weights.size();
  raw.m = 1;
  raw.alpha = alpha;
  raw.weights = std::move(weights);
  raw.b = {1.0};
  for (std::size_t j = 0; j < raw.n; ++j)
    raw.entries.push_back(Entry{0, j, row[j]});
  raw.validate();
  return raw;
}

std::vector<double> random_feasible(Rng& rng, const PackingProblem& p) {
  // A scaled point below the fullest row stays feasible for every row.
  std::vector<double> x(p.num_vars());
  const double cap = 1.0 / p.max_row_sum();
  for (double& v : x) v = rng.uniform(0.05, 0.95) * cap;
  return x;
}

void InvariantChecker::new_epoch() {
  seen_feasible_ = false;
  prev_feasible_ = false;
  have_prev_ = false;
}

void InvariantChecker::record(std::uint64_t round, const std::string& what) {
  if (violations_.size() < 32)
    violations_.push_back("round " + std::to_string(round) + ": " + what);
}

void InvariantChecker::observe(const RoundRecord& rec, const SolverState& state) {
  rounds_seen_++;
  const std::size_t n = p_->num_vars();
  const double upper = synchronous_ ? 1.0 : 1.0 + params_->beta1;
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = state.x_snapshot[j];
    if (xj < params_->delta[j] * (1.0 - 1e-12) || xj > upper * (1.0 + 1e-12)) {
      record(rec.round, "clamp box violated at agent " + std::to_string(j));
      break;
    }
  }

  const bool feasible = rec.max_violation <= 0.0;
  if (seen_feasible_ && rec.max_violation > 1e-12)
    record(rec.round, "feasibility absorption violated, max violation " +
                          std::to_string(rec.max_violation));
  if (feasible) seen_feasible_ = true;

  if (prev_feasible_ &&
      rec.potential < prev_potential_ - 1e-12 * std::abs(prev_potential_))
    record(rec.round, "potential decreased");

  if (prev_feasible_ && feasible && have_prev_) {
    const double band = params_->gamma / 4.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ratio = state.xi[j] / prev_xi_[j];
      if (ratio < 1.0 - band - 1e-9 || ratio > 1.0 + band + 1e-9) {
        record(rec.round, "kkt ratio drift out of band at agent " +
                              std::to_string(j) + " (ratio " +
                              std::to_string(ratio) + ")");
        break;
      }
    }
  }

  if (!std::isnan(rec.gap) && rec.gap < -1e-9)
    record(rec.round, "weak duality violated, gap " + std::to_string(rec.gap));

  if (rec.round >= acs_from_) {
    if (!rec.acs1) record(rec.round, "acs condition 1 violated");
    if (!rec.acs2) record(rec.round, "acs condition 2 violated");
    if (!rec.acs3) record(rec.round, "acs condition 3 violated");
    if (params_->alpha_effective < 1.0) {
      const double floor = 1.0 - 1.25 * params_->gamma - 1e-9;
      for (std::size_t j = 0; j < n; ++j)
        if (state.xi[j] <= floor) {
          record(rec.round, "kkt ratio floor violated at agent " + std::to_string(j));
          break;
        }
    }
  }

  prev_feasible_ = feasible;
  prev_potential_ = rec.potential;
  prev_xi_.assign(state.xi.begin(), state.xi.end());
  have_prev_ = true;
}

}  // namespace alphafair::testing
