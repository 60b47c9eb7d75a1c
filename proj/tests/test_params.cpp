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

#include <cmath>

#include "doctest.h"

#include "alphafair/errors.hpp"
#include "alphafair/params.hpp"
#include "support.hpp"

using namespace alphafair;
using namespace alphafair::testing;

TEST_CASE("epsilon admissibility") {
  CHECK(validate_epsilon(0.1, 1.0) == 0.1);
  // binding bound 9/(10 alpha) = 0.1 at alpha = 9
  CHECK_THROWS_WITH_AS((void)validate_epsilon(0.11, 9.0),
                       doctest::Contains("9/(10 alpha)"), Error);
  CHECK(validate_epsilon(0.11, 9.0, EpsilonMode::clamp) == doctest::Approx(0.1));
  // binding bound (1-alpha)/alpha = 1/9 at alpha = 0.9
  CHECK_THROWS_WITH_AS((void)validate_epsilon(0.15, 0.9),
                       doctest::Contains("(1-alpha)/alpha"), Error);
  CHECK(validate_epsilon(0.15, 0.9, EpsilonMode::clamp) ==
        doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_WITH_AS((void)validate_epsilon(0.2, 1.0),
                       doctest::Contains("1/6"), Error);
  CHECK_THROWS_AS((void)validate_epsilon(0.0, 1.0), Error);
  CHECK_THROWS_AS((void)validate_epsilon(-0.1, 1.0), Error);
}

TEST_CASE("derived constants on the reference instance") {
  // n = 2, m = 1, A_max = 1, w = (1, 1), alpha = 1, eps = 0.1.
  const RawProblem raw = single_constraint_instance({1.0, 1.0}, {1.0, 1.0}, 1.0);
  const PackingProblem p = PackingProblem::normalize(raw);
  const SolverParams prm = derive(p, 0.1);

  // Independent route: delta = (1/2) * (1/(1*4*1)) = 1/8, C = W / (2 delta),
  // kappa = 10 ln(C m A_max / (0.1 w_min)) = 10 ln 80.
  CHECK(prm.delta[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(prm.delta[1] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(prm.C == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(prm.kappa == doctest::Approx(10.0 * std::log(80.0)).epsilon(1e-12));
  CHECK(prm.kappa == doctest::Approx(43.82026634673881).epsilon(1e-12));
  CHECK(prm.gamma == doctest::Approx(0.025));
  const double beta_expected = 0.025 / (5.0 * (prm.kappa + 1.0));
  CHECK(prm.beta1 == doctest::Approx(beta_expected).epsilon(1e-12));
  CHECK(prm.beta1 == doctest::Approx(1.1156e-4).epsilon(1e-4));
  CHECK(prm.beta2 == prm.beta1);  // alpha = 1
  CHECK(prm.tau0 ==
        doctest::Approx(std::log(1.0 / prm.delta_min) / prm.beta1));
}

TEST_CASE("C times delta^alpha reproduces every weight") {
  Rng rng(31);
  for (double alpha : {0.3, 0.5, 1.0, 1.7, 2.0, 5.0}) {
    InstanceSpec spec;
    spec.alpha = alpha;
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    const double eps = validate_epsilon(0.1, alpha, EpsilonMode::clamp);
    const SolverParams prm = derive(p, eps);
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
      const double lhs = prm.C * std::pow(prm.delta[j], alpha);
      CHECK(lhs == doctest::Approx(p.weights()[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha > 1 threshold uses the reduced A_max exponent") {
  // A_max = 4, alpha = 2: the denominator carries A_max^{2 - 1/2} = 8.
  RawProblem raw = single_constraint_instance({1.0, 1.0}, {4.0, 4.0}, 2.0);
  const PackingProblem p = PackingProblem::normalize(raw);
  const SolverParams prm = derive(p, 0.1);
  const double expected = std::sqrt(0.5) / (1.0 * 4.0 * 8.0);
  CHECK(prm.delta[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("step-size safety margins hold with nonnegative slack") {
  Rng rng(67);
  for (double alpha : {0.4, 1.0, 3.0}) {
    InstanceSpec spec;
    spec.alpha = alpha;
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    const double eps = validate_epsilon(0.15, alpha, EpsilonMode::clamp);
    const SolverParams prm = derive(p, eps);
    const double up =
        std::pow(1.0 + prm.beta1, alpha) * std::exp(prm.kappa * prm.beta1);
    const double down =
        std::pow(1.0 - prm.beta2, alpha) * std::exp(-prm.kappa * prm.beta2);
    CHECK(up <= 1.0 + prm.gamma / 4.0);
    CHECK(down >= 1.0 - prm.gamma / 4.0);
    CHECK(prm.delta_min <= prm.delta_max);
    CHECK(prm.delta_max < 1.0);
  }
}

TEST_CASE("larger epsilon gives larger increase steps") {
  Rng rng(68);
  InstanceSpec spec;
  spec.alpha = 1.0;
  const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
  const SolverParams small = derive(p, 0.05);
  const SolverParams big = derive(p, 0.1);
  CHECK(big.beta1 > small.beta1);
}

TEST_CASE("instances whose duals overflow doubles are rejected") {
  // log C ~ ln 2 + 80 (2 ln 20) + 159 ln 8 > 700.
  RawProblem raw = single_constraint_instance(
      std::vector<double>(20, 1.0), std::vector<double>(20, 8.0), 80.0);
  const PackingProblem p = PackingProblem::normalize(raw);
  CHECK_THROWS_WITH_AS((void)derive(p, 0.01),
                       doctest::Contains("instance out of float range"), Error);
}
