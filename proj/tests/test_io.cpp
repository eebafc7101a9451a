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

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "sideobs/error.hpp"
#include "sideobs/io.hpp"

using namespace sideobs;

namespace {

ErrorCode config_error(const std::string& text) {
  try {
    (void)config_from_json(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config was accepted: " << text);
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("shortest round-trip doubles") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-7) == "-2.5e-07");
  const double odd = 0.1 + 0.2;
  CHECK(std::stod(format_double(odd)) == odd);
}

TEST_CASE("graph JSON round trip and validation") {
  const ObservationGraph g = gen_grid_geometric(3, GridRule::kInvOnePlusD2);
  CHECK(graph_from_json(graph_to_json(g)) == g);
  CHECK_THROWS_AS(graph_from_json("{\"n\":2,\"weights\":[1,0.5,0.5]}"), Error);
  CHECK_THROWS_AS(graph_from_json("{\"n\":1,\"weights\":[1],\"x\":0}"), Error);
  CHECK_THROWS_AS(graph_from_json("{\"n\":2,\"weights\":[1,2,0,1]}"), Error);
  CHECK_THROWS_AS(graph_from_json("[1,2"), Error);
}

TEST_CASE("loss CSV round trip and validation") {
  Rng rng(3);
  const LossSequence l = gen_random_walk_losses(4, 3, 20, 0.1, rng);
  std::stringstream ss;
  write_losses_csv(ss, l);
  CHECK(ss.str().rfind("arm_0,arm_1,arm_2,arm_3\n", 0) == 0);
  CHECK(read_losses_csv(ss) == l);

  std::istringstream short_row("arm_0,arm_1\n0.1,0.2\n0.3\n");
  CHECK_THROWS_AS(read_losses_csv(short_row), Error);
  std::istringstream bad_header("a,b\n0.1,0.2\n");
  CHECK_THROWS_AS(read_losses_csv(bad_header), Error);
  std::istringstream not_number("arm_0\nabc\n");
  CHECK_THROWS_AS(read_losses_csv(not_number), Error);
  std::istringstream out_of_range("arm_0\n1.5\n");
  CHECK_THROWS_AS(read_losses_csv(out_of_range), Error);
  std::istringstream crlf("arm_0,arm_1\r\n0.1,0.2\r\n");
  CHECK(read_losses_csv(crlf).at(0, 1) == 0.2);
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const RunConfig cfg = config_from_json("{}");
    CHECK(cfg.arms == 25);
    CHECK(cfg.horizon == 5000);
    CHECK(cfg.policy.name == "exp3-wix");
    CHECK(cfg.graph.kind == GraphSpec::Kind::kGrid);
    CHECK(cfg.losses.interleave == Interleave::kFixed);
  }
  SUBCASE("every field") {
    const RunConfig cfg = config_from_json(R"({
      "arms": 16, "horizon": 100, "seed": 5, "repetitions": 3,
      "policy": {"algorithm": "exp3-ixt", "epsilon": 0.4,
                 "rates": {"mode": "static", "eta": 0.1, "gamma": 0.05}},
      "graph": {"generator": "grid", "k": 4, "rule": "inv_one_plus_d2", "spacing": "unit"},
      "losses": {"generator": "random_walk", "walks": 5, "sigma": 0.1, "interleave": "rotate"},
      "noise": {"distribution": "rademacher_scaled", "R": 0.5}})");
    CHECK(cfg.arms == 16);
    CHECK(cfg.policy.estimator.kind == EstimatorKind::kTruncated);
    CHECK(cfg.policy.estimator.epsilon == 0.4);
    CHECK(cfg.policy.rates.mode == RateSchedule::Mode::kStatic);
    CHECK(cfg.policy.rates.noise_bound == 0.5);
    CHECK(cfg.graph.spacing == GridSpacing::kUnit);
    CHECK(cfg.losses.interleave == Interleave::kRotate);
    CHECK(cfg.noise.kind == NoiseKind::kRademacherScaled);

    const RunConfig again = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(again) == config_to_json(cfg));
  }
  SUBCASE("custom policy round trip") {
    const RunConfig cfg = config_from_json(R"({"policy": {"algorithm": "custom",
      "estimator": "weighted", "delta": 2, "view": "binarized", "view_epsilon": 0.3}})");
    CHECK(cfg.policy.view == ObservationView::kBinarized);
    CHECK(config_to_json(config_from_json(config_to_json(cfg))) == config_to_json(cfg));
  }
  SUBCASE("rejections") {
    CHECK(config_error(R"({"bogus": 1})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"policy": {"algorithm": "exp3", "lr": 1}})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"policy": {"algorithm": "nope"}})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"policy": {"algorithm": "exp3", "view": "full"}})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"policy": {"rates": {"mode": "static"}}})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"policy": {"rates": {"mode": "adaptive", "eta": 1}}})") ==
          ErrorCode::kValidation);
    CHECK(config_error(R"({"arms": -3})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"arms": "many"})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"arms": 10})") == ErrorCode::kValidation);  // 5x5 grid
    CHECK(config_error(R"({"graph": {"generator": "grid", "rule": "cubic"}})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"losses": {"file": "x.csv", "walks": 3}})") == ErrorCode::kValidation);
    CHECK(config_error(R"({"noise": {"distribution": "gauss"}})") == ErrorCode::kValidation);
    CHECK(config_error("[]") == ErrorCode::kValidation);
    CHECK(config_error("{") == ErrorCode::kValidation);
  }
}

TEST_CASE("file-backed graph and losses feed an experiment") {
  const auto dir = std::filesystem::temp_directory_path() / "sideobs_io_test";
  std::filesystem::create_directories(dir);
  const auto gpath = (dir / "g.json").string();
  const auto lpath = (dir / "l.csv").string();
  save_graph(gpath, ObservationGraph::identity(3));
  Rng rng(1);
  save_losses(lpath, gen_random_walk_losses(3, 2, 40, 0.1, rng));

  const RunConfig cfg = config_from_json(R"({"arms": 3, "horizon": 40,
    "graph": {"file": ")" + gpath + R"("}, "losses": {"file": ")" + lpath + R"("}})");
  const Experiment exp = prepare_experiment(cfg);
  CHECK(*exp.graph == ObservationGraph::identity(3));
  CHECK(exp.losses->horizon() == 40);

  RunConfig wrong = cfg;
  wrong.horizon = 41;
  CHECK_THROWS_AS(prepare_experiment(wrong), Error);
  CHECK_THROWS_AS(load_graph((dir / "missing.json").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("CSV writers") {
  RegretTrace tr;
  tr.rounds.push_back({2, 0.5, 0.5, 0.25, 3.0, 0.1, 0.1, -0.2});
  std::ostringstream t;
  write_trace_csv(t, tr);
  CHECK(t.str() == "round,arm,loss,cum_regret,Q,eta,gamma\n1,2,0.5,0.25,3,0.1,0.1\n");

  AggregateResult a;
  a.key = "exp3-ixt@0.5";
  a.regrets = {1.5, 2.0};
  std::ostringstream ag;
  write_aggregate_csv(ag, {a});
  CHECK(ag.str() == "config_key,rep,final_regret\nexp3-ixt@0.5,0,1.5\nexp3-ixt@0.5,1,2\n");

  std::ostringstream sc;
  write_alpha_scatter_csv(sc, {{5, 0, 99, 2.0, 0.5, false}, {5, 1, 7, 0.0, 0.0, true}});
  CHECK(sc.str() ==
        "n,seed,alpha_star,eps_star\n5,99,2,0.5\n5,7,budget-exceeded,budget-exceeded\n");
}

TEST_CASE("alpha* JSON") {
  const AlphaStarResult r = effective_independence_number(gen_grid_geometric(2, GridRule::kMin3OverD2));
  const std::string text = alpha_star_to_json(r);
  CHECK(text.find("\"alpha_star\": 1") != std::string::npos);
  CHECK(text.find("\"curve\"") != std::string::npos);
}
