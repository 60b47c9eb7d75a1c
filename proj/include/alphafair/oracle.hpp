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

#include <span>
#include <string>
#include <vector>

#include "alphafair/model.hpp"

namespace alphafair {

/// Reference optimum from an independent method, with measured (never
/// assumed) KKT residuals.
struct OracleSolution {
  std::vector<double> x;
  std::vector<double> y;       // duals when the method produces them
  double kkt_residual = 0.0;   // max over the four KKT condition residuals
  double objective = 0.0;
  std::string method;
  bool converged = false;
};

/// Damped-Newton log-barrier solver for the normalized problem at the given
/// alpha. mu-schedule mu <- mu/10 from 1 down to tol; duals mu / slack.
/// Desk scale only (n, m <= 200), tol >= 1e-10.
OracleSolution barrier_solve(const PackingProblem& problem, double alpha, double tol);

/// m = 1 exact solution: x_j = (w_j / (y A_1j))^{1/alpha} with the dual y
/// found by bisection so the constraint is tight.
std::vector<double> single_constraint_closed_form(std::span<const double> weights,
                                                  std::span<const double> row,
                                                  double alpha);

/// Progressive filling: raise all unfrozen coordinates at one rate, freeze
/// the variables of every constraint that becomes tight, repeat. On packing
/// polytopes this yields the max-min fair vector.
std::vector<double> max_min_fair(const PackingProblem& problem);

struct LpSolution {
  std::vector<double> x;
  double value = 0.0;
};

/// Exact LP optimum of max sum_j weights_j z_j over the normalized polytope
/// by basic-feasible-point enumeration. n, m <= 12.
LpSolution lp_solve(const PackingProblem& problem, std::span<const double> weights);

}  // namespace alphafair
