// Copyright 2026 The sideobs Authors.
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
#include "oracles.hpp"
#include "sideobs/error.hpp"
#include "sideobs/graph.hpp"

using namespace sideobs;

namespace {

ObservationGraph uniform_off_diagonal(std::size_t n, double w) {
  std::vector<double> m(n * n, w);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return ObservationGraph(n, std::move(m));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("node set operations") {
  NodeSet a(130);
  CHECK(a.none());
  a.set(0);
  a.set(64);
  a.set(129);
  CHECK(a.count() == 3);
  CHECK(a.first() == 0);
  a.reset(0);
  CHECK(a.first() == 64);
  NodeSet b(130);
  b.fill();
  CHECK(b.count() == 130);
  b.subtract(a);
  CHECK(b.count() == 128);
  NodeSet c(130);
  c.assign_and(a, b);
  CHECK(c.none());
}

TEST_CASE("observation graph validation") {
  CHECK(code_of([] { ObservationGraph(2, {1, 0.5, 0.5}); }) == ErrorCode::kInvalidInput);
  CHECK(code_of([] { ObservationGraph(2, {1, 1.5, 0.5, 1}); }) == ErrorCode::kInvalidInput);
  CHECK(code_of([] { ObservationGraph(2, {1, -0.1, 0.5, 1}); }) == ErrorCode::kInvalidInput);
  CHECK(code_of([] { ObservationGraph(2, {0.9, 0.5, 0.5, 1}); }) == ErrorCode::kInvalidInput);
  CHECK(code_of([] { ObservationGraph(2, {0.9, 0.5, 0.5, 0.8}, DiagonalRule::kConstant); }) ==
        ErrorCode::kInvalidInput);
  const ObservationGraph c(2, {0.9, 0.5, 0.5, 0.9}, DiagonalRule::kConstant);
  CHECK(c.diagonal() == 0.9);
  CHECK(c.max_off_diagonal() == 0.5);
}

TEST_CASE("threshold keeps arcs at or above eps and never self-loops") {
  const ObservationGraph g(3, {1, 0.4, 0.6, 0.6, 1, 0, 0.39, 0.4, 1});
  const BinaryDigraph b = threshold(g, 0.4);
  CHECK(b.has_arc(0, 1));
  CHECK(b.has_arc(0, 2));
  CHECK(b.has_arc(1, 0));
  CHECK_FALSE(b.has_arc(1, 2));
  CHECK_FALSE(b.has_arc(2, 0));
  CHECK(b.has_arc(2, 1));
  CHECK_FALSE(b.has_arc(0, 0));
  CHECK(b.arc_count() == 4);
  CHECK_THROWS_AS(threshold(g, 0.0), Error);
  CHECK_THROWS_AS(threshold(g, 1.1), Error);
  CHECK_THROWS_AS(BinaryDigraph(2).add_arc(1, 1), Error);
}

TEST_CASE("grid generator weights") {
  SUBCASE("single node") {
    const ObservationGraph g = gen_grid_geometric(1, GridRule::kInvOnePlusD2);
    CHECK(g.size() == 1);
    CHECK(g.weight(0, 0) == 1.0);
  }
  SUBCASE("k=2 inverse rule at unit spacing") {
    const ObservationGraph g = gen_grid_geometric(2, GridRule::kInvOnePlusD2, GridSpacing::kUnit);
    CHECK(g.weight(0, 1) == doctest::Approx(0.5));
    CHECK(g.weight(0, 2) == doctest::Approx(0.5));
    CHECK(g.weight(0, 3) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("k=3 inverse rule on the unit square") {
    // Neighbours sit 0.5 apart: 1/(1+0.25) = 0.8.
    const ObservationGraph g = gen_grid_geometric(3, GridRule::kInvOnePlusD2);
    CHECK(g.weight(0, 1) == doctest::Approx(0.8));
    CHECK(g.weight(0, 8) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("5x5 min rule") {
    const ObservationGraph g = gen_grid_geometric(5, GridRule::kMin3OverD2);
    for (std::size_t a = 0; a < 25; ++a) {
      for (std::size_t b = 0; b < 25; ++b) {
        const double dx = double(a % 5) - double(b % 5);
        const double dy = double(a / 5) - double(b / 5);
        const double d2 = dx * dx + dy * dy;
        const double expect = a == b ? 1.0 : std::min(3.0 / d2, 1.0);
        CHECK(g.weight(a, b) == doctest::Approx(expect));
        CHECK(g.weight(a, b) == g.weight(b, a));
        if (a != b && d2 <= 3.0) CHECK(g.weight(a, b) == 1.0);
      }
    }
  }
}

TEST_CASE("random uniform generator") {
  Rng rng(7);
  const ObservationGraph g = gen_random_uniform(12, 0.25, 0.75, rng);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(g.weight(i, i) == 1.0);
    for (std::size_t j = 0; j < 12; ++j) {
      if (i != j) {
        CHECK(g.weight(i, j) >= 0.25);
        CHECK(g.weight(i, j) <= 0.75);
      }
    }
  }
  Rng again(7);
  CHECK(gen_random_uniform(12, 0.25, 0.75, again) == g);

  Rng r0(1);
  CHECK(gen_random_uniform(6, 0.0, 0.0, r0) == ObservationGraph::identity(6));
  Rng r1(1);
  CHECK(effective_independence_number(gen_random_uniform(6, 1.0, 1.0, r1)).alpha_star == 1.0);
  Rng bad(1);
  CHECK_THROWS_AS(gen_random_uniform(4, 0.6, 0.5, bad), Error);
}

TEST_CASE("alpha* worked examples") {
  SUBCASE("three nodes at 0.5") {
    const AlphaStarResult r = effective_independence_number(uniform_off_diagonal(3, 0.5));
    CHECK(r.alpha_star == 3.0);
    CHECK(r.epsilon_star == 1.0);
    REQUIRE(r.curve.size() == 2);
    CHECK(r.curve[0].epsilon == 0.5);
    CHECK(r.curve[0].ratio == 4.0);
  }
  SUBCASE("two nodes at 0.9") {
    const AlphaStarResult r = effective_independence_number(uniform_off_diagonal(2, 0.9));
    CHECK(r.alpha_star == doctest::Approx(1.0 / 0.81).epsilon(1e-15));
    CHECK(r.epsilon_star == 0.9);
  }
  SUBCASE("identity graph gives n") {
    for (std::size_t n : {1, 2, 7, 40}) {
      const AlphaStarResult r = effective_independence_number(ObservationGraph::identity(n));
      CHECK(r.alpha_star == double(n));
      CHECK(r.epsilon_star == 1.0);
    }
  }
  SUBCASE("5x5 min rule grid") {
    // Golden value, cross-checked by subset enumeration over every candidate.
    const ObservationGraph g = gen_grid_geometric(5, GridRule::kMin3OverD2);
    const AlphaStarResult r = effective_independence_number(g);
    CHECK(r.epsilon_star == 1.0);
    CHECK(r.alpha_star == 9.0);
  }
  SUBCASE("constant diagonal caps candidates") {
    const ObservationGraph g(2, {0.5, 0.8, 0.8, 0.5}, DiagonalRule::kConstant);
    const AlphaStarResult r = effective_independence_number(g);
    CHECK(r.epsilon_star == 0.5);
    CHECK(r.alpha_star == 4.0);
  }
}

TEST_CASE("alpha* matches brute force and pruned scans agree") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const ObservationGraph g = gen_random_uniform(n, 0.0, 1.0, rng);
    const AlphaStarResult full = effective_independence_number(g);
    const auto brute = oracle::brute_alpha_star(g);
    CHECK(full.alpha_star == brute.alpha_star);
    CHECK(full.epsilon_star == brute.epsilon_star);
    for (std::size_t k = 1; k < full.curve.size(); ++k) {
      CHECK(full.curve[k - 1].epsilon < full.curve[k].epsilon);
      // Raising the threshold removes arcs, so alpha cannot shrink.
      CHECK(full.curve[k - 1].alpha <= full.curve[k].alpha);
    }
    const AlphaStarResult pruned = effective_independence_number(g, {MisOptions{}, false});
    CHECK(pruned.alpha_star == full.alpha_star);
    CHECK(pruned.epsilon_star == full.epsilon_star);
  }
}

TEST_CASE("alpha* of a binary graph is its independence number") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryDigraph b = oracle::random_digraph(4 + trial % 9, 0.3, rng);
    const AlphaStarResult r = effective_independence_number(oracle::binary_weights(b));
    CHECK(r.alpha_star == double(oracle::brute_independence_number(b)));
    CHECK(r.epsilon_star == 1.0);
  }
}

TEST_CASE("q_upper_bound") {
  CHECK(q_upper_bound(1.0, 1, 1.0) == doctest::Approx(2.0 * (1.0 + std::log(4.0))));
  CHECK(q_upper_bound(1.0, 1, 1.0) == doctest::Approx(4.7726).epsilon(1e-4));
  double prev = 0.0;
  for (std::size_t n = 2; n < 40; ++n) {
    const double b = q_upper_bound(3.0, n, 0.1);
    CHECK(b > prev);
    prev = b;
  }
  CHECK(q_upper_bound(3.0, 10, 0.2) < q_upper_bound(3.0, 10, 0.1));
  CHECK_THROWS_AS(q_upper_bound(1.0, 5, 0.0), Error);
  CHECK_THROWS_AS(q_upper_bound(0.5, 5, 0.1), Error);
}
