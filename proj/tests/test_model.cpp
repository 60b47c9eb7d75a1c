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
#include <cstdio>
#include <filesystem>
#include <limits>

#include "doctest.h"

#include "alphafair/errors.hpp"
#include "alphafair/io.hpp"
#include "alphafair/model.hpp"
#include "support.hpp"

using namespace alphafair;
using namespace alphafair::testing;

namespace {

RawProblem tiny(double alpha, std::vector<double> w, std::vector<double> b,
                std::vector<Entry> entries) {
  RawProblem raw;
  raw.n = w.size();
  raw.m = b.size();
  raw.alpha = alpha;
  raw.weights = std::move(w);
  raw.b = std::move(b);
  raw.entries = std::move(entries);
  return raw;
}

}  // namespace

TEST_CASE("normalize applies the two-step scaling") {
  SUBCASE("row divide then variable rescale") {
    const auto p = PackingProblem::normalize(tiny(1.0, {1.0}, {4.0}, {{0, 0, 2.0}}));
    CHECK(p.scale() == doctest::Approx(0.5));
    CHECK(p.matrix().row_vals(0)[0] == doctest::Approx(1.0));
  }
  SUBCASE("identity case") {
    const auto p = PackingProblem::normalize(tiny(1.0, {1.0}, {1.0}, {{0, 0, 1.0}}));
    CHECK(p.scale() == 1.0);
    CHECK(p.matrix().row_vals(0)[0] == 1.0);
  }
  SUBCASE("min entry ratio already at least one") {
    const auto p = PackingProblem::normalize(
        tiny(1.0, {1.0, 1.0}, {2.0, 4.0}, {{0, 0, 2.0}, {1, 1, 8.0}}));
    CHECK(p.scale() == 1.0);
    CHECK(p.matrix().row_vals(0)[0] == doctest::Approx(1.0));
    CHECK(p.matrix().row_vals(1)[0] == doctest::Approx(2.0));
    CHECK(p.max_entry() == doctest::Approx(2.0));
  }
}

TEST_CASE("normalize is idempotent and yields entries >= 1") {
  Rng rng(101);
  for (int k = 0; k < 20; ++k) {
    InstanceSpec spec;
    spec.unit_rhs = false;
    spec.entry_min = 0.2;
    spec.entry_max = 5.0;
    const RawProblem raw = random_instance(rng, spec);
    const PackingProblem p = PackingProblem::normalize(raw);
    for (std::size_t i = 0; i < p.num_constraints(); ++i)
      for (double v : p.matrix().row_vals(i)) CHECK(v >= 1.0 - 1e-12);

    const PackingProblem p2 = PackingProblem::normalize(p.to_raw());
    CHECK(p2.scale() == 1.0);
    REQUIRE(p2.matrix().nnz() == p.matrix().nnz());
    for (std::size_t i = 0; i < p.num_constraints(); ++i) {
      auto a = p.matrix().row_vals(i);
      auto b = p2.matrix().row_vals(i);
      for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t] == b[t]);
    }
  }
}

TEST_CASE("feasibility is preserved across the coordinate change") {
  Rng rng(77);
  for (int k = 0; k < 20; ++k) {
    InstanceSpec spec;
    spec.unit_rhs = false;
    spec.entry_min = 0.3;
    spec.entry_max = 4.0;
    const RawProblem raw = random_instance(rng, spec);
    const PackingProblem p = PackingProblem::normalize(raw);
    const std::vector<double> x_hat = random_feasible(rng, p);

    // x_raw = x_hat / c must satisfy A x <= b, and the reverse direction too.
    std::vector<double> slack(raw.m);
    for (std::size_t i = 0; i < raw.m; ++i) slack[i] = raw.b[i];
    for (const Entry& e : raw.entries)
      slack[e.row] -= e.value * x_hat[e.col] / p.scale();
    for (double s : slack) CHECK(s >= -1e-9);

    CHECK(p.max_violation(x_hat) <= 1e-9);
  }
}

TEST_CASE("row activity uses exact sparse accumulation") {
  const auto p = PackingProblem::normalize(
      tiny(1.0, {1.0, 1.0}, {1.0}, {{0, 0, 1.0}, {0, 1, 1.0}}));
  SUBCASE("simple dot") {
    const std::vector<double> x{0.3, 0.4};
    CHECK(p.row_activity(x)[0] == doctest::Approx(0.7));
  }
  SUBCASE("zero allocation") {
    const std::vector<double> x{0.0, 0.0};
    CHECK(p.row_activity(x)[0] == 0.0);
    CHECK(p.max_violation(x) == doctest::Approx(-1.0));
  }
  SUBCASE("diagonal") {
    const auto q = PackingProblem::normalize(
        tiny(1.0, {1.0, 1.0}, {1.0, 1.0}, {{0, 0, 1.0}, {1, 1, 2.0}}));
    const std::vector<double> x{1.0, 0.5};
    const auto act = q.row_activity(x);
    CHECK(act[0] == doctest::Approx(1.0));
    CHECK(act[1] == doctest::Approx(1.0));
    CHECK(q.max_violation(x) == doctest::Approx(0.0));
  }
  SUBCASE("length mismatch rejected") {
    const std::vector<double> x{0.1};
    CHECK_THROWS_AS((void)p.row_activity(x), Error);
  }
  SUBCASE("violation value") {
    const std::vector<double> x{1.0, 1.0};
    CHECK(p.max_violation(x) == doctest::Approx(1.0));
  }
}

TEST_CASE("objective branches and sentinels") {
  const auto p2 = PackingProblem::normalize(tiny(2.0, {1.0}, {1.0}, {{0, 0, 1.0}}));
  const auto p1 = PackingProblem::normalize(
      tiny(1.0, {1.0, 1.0}, {1.0}, {{0, 0, 1.0}, {0, 1, 1.0}}));

  CHECK(p1.objective(std::vector<double>{1.0, 1.0}, 1.0) == doctest::Approx(0.0));
  CHECK(p2.objective(std::vector<double>{0.5}, 2.0) == doctest::Approx(-2.0));
  CHECK(p2.objective(std::vector<double>{0.25}, 0.5) == doctest::Approx(1.0));

  CHECK(p2.objective(std::vector<double>{0.0}, 2.0) ==
        -std::numeric_limits<double>::infinity());
  CHECK(p2.objective(std::vector<double>{0.0}, 1.0) ==
        -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS((void)p2.objective(std::vector<double>{-0.1}, 2.0), Error);
}

TEST_CASE("objective is strictly concave on random pairs") {
  Rng rng(9);
  for (double alpha : {0.5, 1.0, 2.0}) {
    InstanceSpec spec;
    spec.alpha = alpha;
    const PackingProblem p = PackingProblem::normalize(random_instance(rng, spec));
    for (int k = 0; k < 10; ++k) {
      std::vector<double> x = random_feasible(rng, p);
      std::vector<double> y = random_feasible(rng, p);
      std::vector<double> mid(x.size());
      bool distinct = false;
      for (std::size_t j = 0; j < x.size(); ++j) {
        mid[j] = 0.5 * (x[j] + y[j]);
        distinct = distinct || x[j] != y[j];
      }
      REQUIRE(distinct);
      CHECK(p.objective(mid) > 0.5 * (p.objective(x) + p.objective(y)) - 1e-12);
    }
  }
}

TEST_CASE("problem files round-trip and reject defects") {
  Rng rng(55);
  InstanceSpec spec;
  spec.unit_rhs = false;
  const RawProblem raw = random_instance(rng, spec);
  const std::string path = "test_model_roundtrip.json";
  save_problem(path, raw);
  const RawProblem back = load_problem(path);
  CHECK(back.n == raw.n);
  CHECK(back.m == raw.m);
  CHECK(back.alpha == raw.alpha);
  CHECK(back.weights == raw.weights);
  CHECK(back.b == raw.b);
  // Entries are written in canonical order; compare through the matrix.
  CHECK(PackingProblem::normalize(back).matrix().to_entries() ==
        PackingProblem::normalize(raw).matrix().to_entries());
  std::filesystem::remove(path);

  SUBCASE("nonpositive rhs") {
    CHECK_THROWS_WITH_AS(
        (void)parse_problem_json(
            R"({"alpha":1,"weights":[1],"b":[0],"entries":[[0,0,1]]})"),
        doctest::Contains("nonpositive rhs"), Error);
  }
  SUBCASE("unconstrained variable") {
    CHECK_THROWS_WITH_AS(
        (void)parse_problem_json(
            R"({"alpha":1,"weights":[1,1],"b":[1],"entries":[[0,0,1]]})"),
        doctest::Contains("unconstrained variable"), Error);
  }
  SUBCASE("malformed document") {
    CHECK_THROWS_AS((void)parse_problem_json("{nope"), Error);
    CHECK_THROWS_AS((void)parse_problem_json(R"({"alpha":1})"), Error);
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS((void)parse_problem_json(
                        R"({"alpha":1,"weights":[1],"b":[1],"entries":[[0,3,1]]})"),
                    Error);
  }
  SUBCASE("nonpositive weight") {
    CHECK_THROWS_WITH_AS(
        (void)parse_problem_json(
            R"({"alpha":1,"weights":[-1],"b":[1],"entries":[[0,0,1]]})"),
        doctest::Contains("nonpositive weight"), Error);
  }
  SUBCASE("degenerate sizes") {
    CHECK_THROWS_AS(
        (void)parse_problem_json(R"({"alpha":1,"weights":[],"b":[],"entries":[]})"),
        Error);
  }
}

TEST_CASE("allocation files round-trip with optional fields") {
  AllocationFile a;
  a.x = {0.25, 0.75};
  a.normalized = true;
  a.scale_c = 0.5;
  a.method = "barrier";
  a.kkt_residual = 1e-8;
  const AllocationFile b = parse_allocation_json(allocation_to_json(a));
  CHECK(b.x == a.x);
  CHECK(b.normalized == a.normalized);
  CHECK(b.scale_c == a.scale_c);
  CHECK(b.method == a.method);
  CHECK(b.kkt_residual == a.kkt_residual);
}

TEST_CASE("problem hash ignores the name and tracks content") {
  Rng rng(8);
  RawProblem raw = random_instance(rng, InstanceSpec{});
  RawProblem named = raw;
  named.name = "something else";
  CHECK(problem_hash(raw) == problem_hash(named));
  RawProblem changed = raw;
  changed.weights[0] += 0.5;
  CHECK(problem_hash(raw) != problem_hash(changed));
}
