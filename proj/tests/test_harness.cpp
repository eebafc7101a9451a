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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "sideobs/error.hpp"
#include "sideobs/harness.hpp"

using namespace sideobs;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.arms = 9;
  cfg.horizon = 300;
  cfg.graph.k = 3;
  cfg.seed = 17;
  return cfg;
}

}  // namespace

TEST_CASE("config validation happens before any round") {
  RunConfig cfg = small_config();
  cfg.arms = 10;  // grid has 9 nodes
  CHECK_THROWS_AS(run_episode(cfg), Error);
  cfg = small_config();
  cfg.arms = 1;
  cfg.graph.kind = GraphSpec::Kind::kIdentity;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config();
  cfg.repetitions = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config();
  cfg.graph.kind = GraphSpec::Kind::kRandomUniform;
  cfg.graph.lo = 0.8;
  cfg.graph.hi = 0.2;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("trace bookkeeping") {
  const RunConfig cfg = small_config();
  const Experiment exp = prepare_experiment(cfg);
  const RegretTrace tr = run_episode(exp, cfg.policy, cfg.noise, cfg.seed, 0);
  REQUIRE(tr.rounds.size() == cfg.horizon);

  std::vector<double> totals(cfg.arms, 0.0);
  double cum = 0.0;
  for (std::size_t t = 0; t < cfg.horizon; ++t) {
    const RoundRecord& r = tr.rounds[t];
    CHECK(r.loss == exp.losses->at(t, r.arm));
    cum += r.loss;
    CHECK(r.cum_loss == doctest::Approx(cum));
    for (std::size_t i = 0; i < cfg.arms; ++i) totals[i] += exp.losses->at(t, i);
    CHECK(r.cum_regret == doctest::Approx(cum - *std::min_element(totals.begin(), totals.end())));
    CHECK(r.gamma == doctest::Approx(r.eta));
  }
  CHECK(tr.final_regret ==
        doctest::Approx(tr.learner_total - *std::min_element(tr.arm_totals.begin(), tr.arm_totals.end())));
}

TEST_CASE("identical configs and seeds give identical traces") {
  const RunConfig cfg = small_config();
  const RegretTrace a = run_episode(cfg, 2);
  const RegretTrace b = run_episode(cfg, 2);
  for (std::size_t t = 0; t < a.rounds.size(); ++t) {
    CHECK(a.rounds[t].arm == b.rounds[t].arm);
    CHECK(a.rounds[t].q == b.rounds[t].q);
  }
  const RegretTrace other = run_episode(cfg, 3);
  bool differs = false;
  for (std::size_t t = 0; t < a.rounds.size(); ++t) differs |= a.rounds[t].arm != other.rounds[t].arm;
  CHECK(differs);
}

TEST_CASE("batches") {
  const RunConfig cfg = small_config();
  SUBCASE("one repetition has zero spread") {
    const BatchResult r = run_batch(cfg, 1);
    CHECK(r.aggregate.stddev == 0.0);
    CHECK(r.aggregate.mean == r.aggregate.regrets[0]);
  }
  SUBCASE("doubling repetitions keeps the first half; threads do not matter") {
    const BatchResult four = run_batch(cfg, 4);
    BatchOptions opts;
    opts.threads = 3;
    opts.keep_traces = true;
    const BatchResult eight = run_batch(cfg, 8, opts);
    for (std::size_t r = 0; r < 4; ++r) CHECK(four.aggregate.regrets[r] == eight.aggregate.regrets[r]);
    CHECK(eight.traces.size() == 8);

    const AggregateResult& a = eight.aggregate;
    const auto [lo, hi] = std::minmax_element(a.regrets.begin(), a.regrets.end());
    CHECK(a.mean >= *lo);
    CHECK(a.mean <= *hi);
    double ss = 0.0;
    for (double x : a.regrets) ss += (x - a.mean) * (x - a.mean);
    CHECK(a.stddev == doctest::Approx(std::sqrt(ss / 7.0)));
    CHECK(a.mean_curve.back() == doctest::Approx(a.mean));
  }
}

TEST_CASE("constant losses across arms give zero regret") {
  const std::size_t n = 4;
  const std::size_t horizon = 50;
  std::vector<double> values(n * horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) values[t * n + i] = 0.1 * double(t % 7);
  }
  Experiment exp;
  exp.losses = std::make_shared<const LossSequence>(horizon, n, values);
  exp.graph = std::make_shared<const ObservationGraph>(ObservationGraph::identity(n));
  for (const PolicyConfig& p : {PolicyConfig::exp3(RateSchedule::adaptive(1.0)),
                                PolicyConfig::exp3_wix(RateSchedule::adaptive(1.0)),
                                PolicyConfig::exp3_ixt(0.5, RateSchedule::fixed(0.1, 0.1))}) {
    CHECK(run_episode(exp, p, NoiseModel{}, 1, 0).final_regret == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("exp3 on the bandit graph sees Q = N") {
  RunConfig cfg = small_config();
  cfg.graph.kind = GraphSpec::Kind::kIdentity;
  cfg.policy = PolicyConfig::exp3(RateSchedule::fixed(0.05, 0.0));
  const RegretTrace tr = run_episode(cfg);
  for (const RoundRecord& r : tr.rounds) CHECK(r.q == doctest::Approx(9.0));
  CHECK(tr.final_regret <= double(cfg.horizon));
}

TEST_CASE("theoretical bound") {
  RegretTrace tr;
  for (int t = 0; t < 100; ++t) tr.rounds.push_back({0, 0, 0, 0, 5.0, 0, 0, 0});
  const double expect = 2.0 * std::sqrt(2.0 * 3.0 * 5.0 * 101.0 * std::log(5.0));
  CHECK(theoretical_bound(tr, 5, 1.0) == doctest::Approx(expect));
  const double shorter = [&] {
    RegretTrace half = tr;
    half.rounds.resize(50);
    return theoretical_bound(half, 5, 1.0);
  }();
  CHECK(shorter < theoretical_bound(tr, 5, 1.0));
  CHECK_THROWS_AS(theoretical_bound(RegretTrace{}, 5, 1.0), Error);
}

TEST_CASE("epsilon sweep") {
  RunConfig cfg = small_config();
  cfg.horizon = 150;
  cfg.graph.rule = GridRule::kInvOnePlusD2;  // off-diagonal weights stay below 1
  const std::vector<double> eps{0.0, 0.5, 1.0};
  BatchOptions opts;
  opts.threads = 2;
  const auto rows = sweep_epsilon(cfg, eps, 3, opts);
  REQUIRE(rows.size() == 2 * eps.size() + 2);
  CHECK(rows[0].key == "exp3-ixt@0");
  CHECK(rows[1].key == "exp3-ixb@0");
  CHECK(rows[2].key == "exp3-ixt@0.5");
  CHECK(rows[6].key == "exp3-wix");
  CHECK(rows[7].key == "exp3");

  // Truncation at 0 is the basic estimator on the full graph.
  const Experiment exp = prepare_experiment(cfg);
  for (std::size_t r = 0; r < 3; ++r) {
    const RegretTrace ix = run_episode(exp, PolicyConfig::exp3_ix(cfg.policy.rates), cfg.noise, cfg.seed, r);
    CHECK(rows[0].regrets[r] == ix.final_regret);
  }
  // WIX ignores eps: it matches a plain batch.
  CHECK(rows[6].regrets == run_batch(exp, cfg, 3).aggregate.regrets);
  // IXb above every off-diagonal weight is Exp3.
  const double above = exp.graph->max_off_diagonal() + 1e-6;
  const auto high = sweep_epsilon(cfg, {above}, 3);
  CHECK(high[1].regrets == high[3].regrets);
  CHECK_THROWS_AS(sweep_epsilon(cfg, {1.5}, 1), Error);
}

TEST_CASE("random alpha experiment") {
  AlphaExperimentOptions opts;
  opts.threads = 2;
  const auto rows = random_alpha_experiment({3, 6}, 0.5, 1.0, 10, 4, opts);
  REQUIRE(rows.size() == 20);
  for (const auto& r : rows) {
    CHECK_FALSE(r.budget_exceeded);
    CHECK(r.alpha_star <= 4.0);
  }
  CHECK(rows[0].n == 3);
  CHECK(rows[10].n == 6);
  const auto again = random_alpha_experiment({3}, 0.5, 1.0, 10, 4);
  for (std::size_t i = 0; i < 10; ++i) CHECK(again[i].seed == rows[i].seed);

  AlphaExperimentOptions tiny;
  tiny.alpha.mis.node_budget = 1;
  const auto starved = random_alpha_experiment({40}, 0.0, 0.3, 2, 1, tiny);
  for (const auto& r : starved) {
    CHECK(r.budget_exceeded);
    CHECK(std::isnan(r.alpha_star));
  }
  CHECK_THROWS_AS(random_alpha_experiment({3}, 0.6, 0.2, 1, 1), Error);
}

TEST_CASE("Q ceiling diagnostics on the grid") {
  RunConfig cfg;
  cfg.horizon = 400;
  BatchOptions opts;
  opts.keep_traces = true;
  opts.episode.check_q_ceiling = true;
  const BatchResult r = run_batch(cfg, 2, opts);
  for (const RegretTrace& t : r.traces) {
    CHECK(t.q_ceiling_checks == cfg.horizon);
    CHECK(t.q_ceiling_violations == 0);
  }
}
