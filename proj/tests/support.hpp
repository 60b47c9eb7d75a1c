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

#include <cstddef>
#include <vector>

#include "alphafair/model.hpp"
#include "alphafair/rng.hpp"

namespace alphafair::testing {

struct InstanceSpec {
  std::size_t n_min = 2, n_max = 10;
  std::size_t m_min = 1, m_max = 6;
  double entry_min = 1.0, entry_max = 4.0;
  double weight_min = 1.0, weight_max = 5.0;
  double density = 0.5;        // chance of each extra (i, j) entry
  bool unit_rhs = true;        // b = 1 (already row-normalized)
  double alpha = 1.0;
};

/// Random valid instance: every column gets at least one entry, every row at
/// least one as well; entry values in [entry_min, entry_max].
RawProblem random_instance(Rng& rng, const InstanceSpec& spec);

/// Single constraint sum_j row_j x_j <= 1.
RawProblem single_constraint_instance(std::vector<double> weights,
                                      std::vector<double> row, double alpha);

/// Random strictly feasible allocation for the normalized problem.
std::vector<double> random_feasible(Rng& rng, const PackingProblem& p);

}  // namespace alphafair::testing

#include "alphafair/solver.hpp"

namespace alphafair::testing {

/// Per-round invariant watchdog, fed from the solve/run observer hook.
/// Violations are recorded with the round index and a short description.
class InvariantChecker {
 public:
  InvariantChecker(const PackingProblem& problem, const SolverParams& params,
                   bool synchronous = true)
      : p_(&problem), params_(&params), synchronous_(synchronous) {}

  // Enables the approximate-complementary-slackness and (for alpha < 1) KKT
  // ratio floor checks from the given round on.
  void enable_acs_from(std::uint64_t round) { acs_from_ = round; }

  // Forgets cross-round state (use right after a perturbation event).
  void new_epoch();

  void observe(const RoundRecord& rec, const SolverState& state);

  const std::vector<std::string>& violations() const { return violations_; }
  std::uint64_t rounds_seen() const { return rounds_seen_; }

 private:
  void record(std::uint64_t round, const std::string& what);

  const PackingProblem* p_;
  const SolverParams* params_;
  bool synchronous_ = true;
  std::uint64_t acs_from_ = UINT64_MAX;
  bool seen_feasible_ = false;
  bool prev_feasible_ = false;
  double prev_potential_ = 0.0;
  std::vector<double> prev_xi_;
  bool have_prev_ = false;
  std::uint64_t rounds_seen_ = 0;
  std::vector<std::string> violations_;
};

}  // namespace alphafair::testing
