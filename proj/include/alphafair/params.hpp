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
#include <vector>

#include "alphafair/model.hpp"

namespace alphafair {

/// Every constant the round update needs, derived from (epsilon, alpha,
/// problem statistics). Immutable and shareable.
struct SolverParams {
  double epsilon = 0.0;          // the epsilon these constants came from
  double alpha_effective = 1.0;
  std::vector<double> delta;     // per-agent lower thresholds delta_j
  double delta_min = 0.0;
  double delta_max = 0.0;
  double C = 0.0;                // dual multiplier, C * delta_j^alpha = w_j
  double log_C = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;            // epsilon / 4
  double beta1 = 0.0;            // multiplicative increase step
  double beta2 = 0.0;            // multiplicative decrease step
  double tau0 = 0.0;             // (1/beta1) ln(1/delta_min)
  double tau1 = 0.0;             // (1/beta2) ln(n A_max)
};

enum class EpsilonMode { reject, clamp };

/// Admissible range: epsilon <= min{1/6, 9/(10 alpha)} for all alpha, and
/// additionally epsilon <= (1-alpha)/alpha when alpha < 1. In clamp mode the
/// largest admissible value <= the request is returned; in reject mode an
/// out-of-range request throws Error(epsilon_range) naming the violated bound.
double validate_epsilon(double epsilon, double alpha,
                        EpsilonMode mode = EpsilonMode::reject);

/// Derives all constants at the given (already validated) epsilon and alpha.
/// Throws Error(float_range) when the duals of a feasible allocation could not
/// be represented ("instance out of float range").
SolverParams derive(const PackingProblem& problem, double epsilon, double alpha);

inline SolverParams derive(const PackingProblem& problem, double epsilon) {
  return derive(problem, epsilon, problem.alpha());
}

}  // namespace alphafair
