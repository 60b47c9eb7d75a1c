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

#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "alphafair/errors.hpp"
#include "alphafair/oracle.hpp"
#include "support.hpp"

using namespace alphafair;
using namespace alphafair::testing;

TEST_CASE("barrier oracle matches closed forms") {
  SUBCASE("proportional fairness splits by weight") {
    const PackingProblem p = PackingProblem::normalize(
        single_constraint_instance({1.0, 3.0}, {1.0, 1.0}, 1.0));
    const OracleSolution s = barrier_solve(p, 1.0, 1e-7);
    REQUIRE(s.converged);
    CHECK(s.x[0] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(s.x[1] == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(s.y[0] == doctest::Approx(4.0).epsilon(1e-4));
  }
  SUBCASE("alpha = 2 splits by sqrt weight") {
    const PackingProblem p = PackingProblem::normalize(
        single_constraint_instance({1.0, 4.0}, {1.0, 1.0}, 2.0));
    const OracleSolution s = barrier_solve(p, 2.0, 1e-7);
    REQUIRE(s.converged);
    CHECK(s.x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(s.x[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  }
}

TEST_CASE("barrier output is feasible with small KKT residuals") {
  Rng rng(41);
  InstanceSpec spec;
  spec.n_min = 5, spec.n_max = 10, spec.m_min = 3, spec.m_max = 6;
  for (int k = 0; k < 6; ++k) {
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    for (double alpha : {0.5, 1.0, 2.0}) {
      const OracleSolution s = barrier_solve(p, alpha, 1e-7);
      REQUIRE(s.converged);
      CHECK(p.max_violation(s.x) <= 0.0);
      CHECK(*std::min_element(s.x.begin(), s.x.end()) > 0.0);
      CHECK(s.kkt_residual <= 10.0 * 1e-7);
      // complementary slackness residual per constraint
      const auto act = p.row_activity(s.x);
      for (std::size_t i = 0; i < p.num_constraints(); ++i)
        CHECK(std::abs(s.y[i] * (act[i] - 1.0)) <= 10.0 * 1e-7);
    }
  }
}

TEST_CASE("barrier guards") {
  const PackingProblem p = PackingProblem::normalize(
      single_constraint_instance({1.0}, {1.0}, 1.0));
  CHECK_THROWS_AS((void)barrier_solve(p, 1.0, 1e-12), Error);
}

TEST_CASE("single-constraint closed form") {
  SUBCASE("symmetric") {
    const auto x = single_constraint_closed_form(std::vector<double>{1.0, 1.0},
                                                 std::vector<double>{1.0, 1.0}, 0.5);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("weighted proportional") {
    const auto x = single_constraint_closed_form(std::vector<double>{1.0, 3.0},
                                                 std::vector<double>{1.0, 1.0}, 1.0);
    CHECK(x[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(0.75).epsilon(1e-10));
  }
  SUBCASE("uneven coefficients: the tight dual is 2") {
    const auto x = single_constraint_closed_form(std::vector<double>{1.0, 1.0},
                                                 std::vector<double>{1.0, 2.0}, 1.0);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(0.25).epsilon(1e-10));
  }
  SUBCASE("agrees with the barrier on random rows") {
    Rng rng(42);
    for (int k = 0; k < 8; ++k) {
      const std::size_t n = 2 + rng.index(6);
      std::vector<double> w(n), row(n);
      for (auto& v : w) v = rng.uniform(1.0, 5.0);
      for (auto& v : row) v = rng.uniform(1.0, 4.0);
      const double alpha = std::vector<double>{0.5, 1.0, 2.0}[rng.index(3)];
      const auto x = single_constraint_closed_form(w, row, alpha);
      const PackingProblem p =
          PackingProblem::normalize(single_constraint_instance(w, row, alpha));
      const OracleSolution s = barrier_solve(p, alpha, 1e-8);
      REQUIRE(s.converged);
      for (std::size_t j = 0; j < n; ++j)
        CHECK(x[j] == doctest::Approx(s.x[j]).epsilon(1e-6));
    }
  }
}

TEST_CASE("progressive filling") {
  SUBCASE("one bottleneck") {
    RawProblem raw;
    raw.n = 2;
    raw.m = 2;
    raw.alpha = 1.0;
    raw.weights = {1.0, 1.0};
    raw.b = {1.0, 1.0};
    raw.entries = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}};
    const auto z = max_min_fair(PackingProblem::normalize(raw));
    CHECK(z[0] == doctest::Approx(0.5));
    CHECK(z[1] == doctest::Approx(0.5));
  }
  SUBCASE("chain of two constraints") {
    RawProblem raw;
    raw.n = 3;
    raw.m = 2;
    raw.alpha = 1.0;
    raw.weights = {1.0, 1.0, 1.0};
    raw.b = {1.0, 1.0};
    raw.entries = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}, {1, 2, 1.0}};
    const auto z = max_min_fair(PackingProblem::normalize(raw));
    CHECK(z[0] == doctest::Approx(0.5));
    CHECK(z[1] == doctest::Approx(0.5));
    CHECK(z[2] == doctest::Approx(0.5));
  }
  SUBCASE("early bottleneck frees the rest") {
    RawProblem raw;
    raw.n = 2;
    raw.m = 2;
    raw.alpha = 1.0;
    raw.weights = {1.0, 1.0};
    raw.b = {1.0, 1.0};
    raw.entries = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 5.0}};
    const auto z = max_min_fair(PackingProblem::normalize(raw));
    CHECK(z[0] == doctest::Approx(0.2));
    CHECK(z[1] == doctest::Approx(0.8));
  }
}

TEST_CASE("progressive filling passes the exchange test") {
  // Definition-level check: no feasible candidate can raise a coordinate
  // without lowering another that is already no larger.
  Rng rng(43);
  InstanceSpec spec;
  spec.n_min = 3, spec.n_max = 6, spec.m_min = 2, spec.m_max = 4;
  for (int inst = 0; inst < 3; ++inst) {
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    const auto z_star = max_min_fair(p);
    CHECK(p.max_violation(z_star) <= 1e-9);
    for (int c = 0; c < 10000; ++c) {
      const auto z = random_feasible(rng, p);
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (z[j] > z_star[j] + 1e-9) {
          bool witness = false;
          for (std::size_t k = 0; k < z.size(); ++k)
            if (z[k] < z_star[k] - 1e-12 && z_star[k] <= z_star[j] + 1e-9) {
              witness = true;
              break;
            }
          CHECK(witness);
          if (!witness) return;
        }
      }
    }
  }
}

TEST_CASE("vertex-enumeration LP") {
  SUBCASE("unit weights saturate the single constraint") {
    const PackingProblem p = PackingProblem::normalize(
        single_constraint_instance({1.0, 1.0}, {1.0, 1.0}, 1.0));
    const LpSolution s = lp_solve(p, p.weights());
    CHECK(s.value == doctest::Approx(1.0));
  }
  SUBCASE("skewed weights pick the heavy vertex") {
    const PackingProblem p = PackingProblem::normalize(
        single_constraint_instance({2.0, 1.0}, {1.0, 1.0}, 1.0));
    const LpSolution s = lp_solve(p, p.weights());
    CHECK(s.value == doctest::Approx(2.0));
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.x[1] == doctest::Approx(0.0));
  }
  SUBCASE("scale guard") {
    Rng rng(44);
    InstanceSpec spec;
    spec.n_min = 13, spec.n_max = 13, spec.m_min = 2, spec.m_max = 2;
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    CHECK_THROWS_AS((void)lp_solve(p, p.weights()), Error);
  }
}

TEST_CASE("LP matches a grid search on small instances") {
  Rng rng(45);
  for (int inst = 0; inst < 4; ++inst) {
    InstanceSpec spec;
    spec.n_min = 2, spec.n_max = 2, spec.m_min = 1, spec.m_max = 3;
    spec.entry_min = 1.0, spec.entry_max = 2.0;
    spec.weight_min = 0.5, spec.weight_max = 1.0;
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    const LpSolution s = lp_solve(p, p.weights());

    // Brute force on a 1e-3 grid over z_0, with z_1 pushed to its exact cap
    // (weights are nonnegative, so the cap is optimal given z_0).
    double best = 0.0;
    const auto& a = p.matrix();
    for (int g = 0; g <= 1000; ++g) {
      const double z0 = g * 1e-3;
      double cap = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (std::size_t i = 0; i < p.num_constraints(); ++i) {
        double coef0 = 0.0, coef1 = 0.0;
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t t = 0; t < cols.size(); ++t)
          (cols[t] == 0 ? coef0 : coef1) = vals[t];
        const double room = 1.0 - coef0 * z0;
        if (room < 0.0) ok = false;
        if (coef1 > 0.0) cap = std::min(cap, room / coef1);
      }
      if (!ok) continue;
      if (!std::isfinite(cap)) cap = 1.0;  // cannot happen: columns covered
      best = std::max(best, p.weights()[0] * z0 +
                                p.weights()[1] * std::max(cap, 0.0));
    }
    CHECK(s.value >= best - 1e-12);
    CHECK(s.value <= best + 2e-3);
  }
}

TEST_CASE("LP value approaches the barrier value as alpha vanishes") {
  Rng rng(46);
  InstanceSpec spec;
  spec.n_min = 3, spec.n_max = 4, spec.m_min = 3, spec.m_max = 4;
  const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
  const LpSolution lp = lp_solve(p, p.weights());
  const OracleSolution smooth = barrier_solve(p, 1e-3, 1e-8);
  REQUIRE(smooth.converged);
  double linear_value = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j)
    linear_value += p.weights()[j] * smooth.x[j];
  CHECK(std::abs(linear_value - lp.value) <= 0.01 * lp.value);
}
