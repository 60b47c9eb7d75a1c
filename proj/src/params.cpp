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

#include "alphafair/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alphafair/errors.hpp"
#include "alphafair/io.hpp"

namespace alphafair {

// Largest exponent we allow for the duals of a feasible allocation. exp()
// overflows just above 709.78.
static constexpr double kMaxDualExponent = 700.0;

double validate_epsilon(double epsilon, double alpha, EpsilonMode mode) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    raise(ErrorCode::epsilon_range, "epsilon must be a positive finite real");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    raise(ErrorCode::invalid_argument, "alpha must be a positive finite real");

  double bound = 1.0 / 6.0;
  std::string bound_name = "1/6";
  const double alpha_bound = 9.0 / (10.0 * alpha);
  if (alpha_bound < bound) {
    bound = alpha_bound;
    bound_name = "9/(10 alpha)";
  }
  if (alpha < 1.0) {
    const double below_one_bound = (1.0 - alpha) / alpha;
    if (below_one_bound < bound) {
      bound = below_one_bound;
      bound_name = "(1-alpha)/alpha";
    }
  }

  if (epsilon <= bound) return epsilon;
  if (mode == EpsilonMode::clamp) return bound;
  raise(ErrorCode::epsilon_range,
        "epsilon out of admissible range: " + format_double(epsilon) +
            " exceeds " + bound_name + " = " + format_double(bound) +
            " at alpha = " + format_double(alpha));
}

SolverParams derive(const PackingProblem& problem, double epsilon, double alpha) {
  const std::size_t n = problem.num_vars();
  const std::size_t m = problem.num_constraints();
  const double a_max = problem.max_entry();
  const double w_max = problem.weight_max();
  const double w_min = problem.weight_min();
  const double w_sum = problem.weight_sum();

  SolverParams p;
  p.epsilon = epsilon;
  p.alpha_effective = alpha;
  p.gamma = epsilon / 4.0;

  // delta_j in log space; the alpha > 1 branch trades one power of A_max for
  // the exponent 2 - 1/alpha.
  const double log_mnn = std::log(static_cast<double>(m)) +
                         2.0 * std::log(static_cast<double>(n));
  const double log_a_max = std::log(a_max);
  p.delta.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double log_ratio = std::log(problem.weights()[j] / (2.0 * w_max));
    double log_delta;
    if (alpha <= 1.0)
      log_delta = (log_ratio - log_mnn - log_a_max) / alpha;
    else
      log_delta = log_ratio / alpha - log_mnn - (2.0 - 1.0 / alpha) * log_a_max;
    p.delta[j] = std::exp(log_delta);
  }
  p.delta_min = *std::min_element(p.delta.begin(), p.delta.end());
  p.delta_max = *std::max_element(p.delta.begin(), p.delta.end());

  // Closed-form log C for the range guard; the working C comes from the
  // defining sum so that C * delta_j^alpha reproduces w_j to rounding.
  double log_c_closed = std::log(2.0 * w_max);
  if (alpha <= 1.0)
    log_c_closed += log_mnn + log_a_max;
  else
    log_c_closed += alpha * log_mnn + (2.0 * alpha - 1.0) * log_a_max;
  if (log_c_closed > kMaxDualExponent)
    raise(ErrorCode::float_range,
          "instance out of float range: duals of a tight constraint exceed "
          "double precision (log C = " + format_double(log_c_closed) + ")");

  double delta_alpha_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) delta_alpha_sum += std::pow(p.delta[j], alpha);
  p.C = w_sum / delta_alpha_sum;
  p.log_C = std::log(p.C);

  p.kappa = (p.log_C + std::log(static_cast<double>(m)) + log_a_max -
             std::log(epsilon) - std::log(w_min)) / epsilon;

  const double beta = (alpha <= 1.0) ? p.gamma / (5.0 * (p.kappa + 1.0))
                                     : p.gamma / (5.0 * (p.kappa + alpha));
  p.beta1 = beta;
  p.beta2 = (alpha < 1.0) ? beta * beta / std::log(1.0 / p.delta_min) : beta;

  p.tau0 = std::log(1.0 / p.delta_min) / p.beta1;
  p.tau1 = std::log(static_cast<double>(n) * a_max) / p.beta2;

  // Safety margins the step sizes were chosen for; both must hold with
  // nonnegative slack or the drift bound on the KKT ratios breaks.
  const double up = std::exp(alpha * std::log1p(p.beta1) + p.kappa * p.beta1);
  const double down = std::exp(alpha * std::log1p(-p.beta2) - p.kappa * p.beta2);
  if (up > 1.0 + p.gamma / 4.0 || down < 1.0 - p.gamma / 4.0)
    raise(ErrorCode::internal, "derived step sizes violate the drift guards");

  return p;
}

}  // namespace alphafair
