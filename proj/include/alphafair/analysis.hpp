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

#include <string>
#include <vector>

#include "alphafair/model.hpp"
#include "alphafair/oracle.hpp"

namespace alphafair {

/// One structural-check result. pass holds iff measured satisfies the claimed
/// bound within the stated tolerance; checks consume oracle optima so a solver
/// bug cannot mask a transcription bug.
struct LemmaReport {
  std::string lemma_id;
  std::string instance_hash;
  double claimed = 0.0;
  double measured = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string detail;
};

std::string lemma_csv_header();
std::string lemma_report_csv_row(const LemmaReport& report);

/// Elementwise lower bound on the optimum:
///   x*_j >= (w_j/(w_max M) min_{i: A_ij != 0} 1/(n_i A_ij))^{1/alpha}  (alpha <= 1)
///   x*_j >= A_max^{(1-alpha)/alpha} (w_j/(w_max M))^{1/alpha} min_i 1/(n_i A_ij)  (alpha > 1)
/// with M = min{m, n}. Requires oracle.kkt_residual <= 1e-6.
LemmaReport check_lower_bound(const PackingProblem& problem, double alpha,
                              const OracleSolution& oracle);
std::vector<double> optimum_lower_bound(const PackingProblem& problem, double alpha);

/// At alpha = (eps/4)/ln(n A_max / eps): the LP optimum value covers
/// (1 - 3 eps) of the alpha-fair optimum value.
LemmaReport check_lp_approx(const PackingProblem& problem, double epsilon);

/// An eps-approximate alpha = 1 solution stays 2 eps-approximate at the edges
/// alpha = 1 -+ 1/tau0 (measured in each regime's sense).
LemmaReport check_near_one_transfer(const PackingProblem& problem, double epsilon);

/// At alpha = ln(R_w n A_max)/eps: the alpha-fair optimum lies within
/// (1 -+ eps) of the max-min fair vector elementwise, and the max-min vector
/// is eps (alpha - 1)-approximate in objective.
LemmaReport check_mmf_limit(const PackingProblem& problem, double epsilon);

}  // namespace alphafair
