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

#pragma once

// Seeded experiment runner: episodes, repetitions, threshold sweeps, the
// random-graph alpha* study, and the diagnostics that compare realized runs
// with the regret and Q_t bounds.
//
// Seeding: one master seed. The loss sequence and the graph are generated
// once per experiment from their own sub-streams; repetition r draws noise
// and arm samples from streams derived from (master, r). Regret is realized
// regret against the best fixed arm on the realized loss sequence; expected
// regret is approximated by repetition means.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sideobs/environment.hpp"
#include "sideobs/graph.hpp"
#include "sideobs/policies.hpp"

namespace sideobs {

struct GraphSpec {
  enum class Kind { kGrid, kRandomUniform, kIdentity, kFile };
  Kind kind = Kind::kGrid;
  std::size_t k = 5;                          // grid
  GridRule rule = GridRule::kMin3OverD2;      // grid
  GridSpacing spacing = GridSpacing::kDefault;  // grid
  double lo = 0.0;                            // random
  double hi = 1.0;                            // random
  std::string path;                           // file
};

struct LossSpec {
  enum class Kind { kRandomWalk, kFile };
  Kind kind = Kind::kRandomWalk;
  std::size_t walks = 20;
  double sigma = 0.05;
  Interleave interleave = Interleave::kFixed;
  std::string path;
};

struct RunConfig {
  std::size_t arms = 25;
  std::size_t horizon = 5000;
  PolicyConfig policy = PolicyConfig::exp3_wix(RateSchedule::adaptive(1.0));
  GraphSpec graph;
  LossSpec losses;
  NoiseModel noise;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;

  // Throws kValidation on any inconsistency.
  void validate() const;
};

// Loss sequence and graph shared by every repetition of a configuration.
struct Experiment {
  std::shared_ptr<const LossSequence> losses;
  std::shared_ptr<const ObservationGraph> graph;
  std::optional<double> alpha_star;  // filled when diagnostics need it
};

Experiment prepare_experiment(const RunConfig& cfg, bool with_alpha_star = false);

struct RoundRecord {
  std::size_t arm;
  double loss;
  double cum_loss;
  double cum_regret;  // cum_loss - min_i (arm i's cumulative loss so far)
  double q;
  double eta;
  double gamma;
  double min_scaled_estimate;
};

struct RegretTrace {
  std::vector<RoundRecord> rounds;
  std::vector<double> arm_totals;
  double learner_total = 0.0;
  double final_regret = 0.0;
  // Rounds where Q_t exceeded its alpha*-based ceiling (only checked for the
  // weighted estimator with gamma_t > 0 and a known alpha*).
  std::size_t q_ceiling_violations = 0;
  std::size_t q_ceiling_checks = 0;
  std::vector<std::string> warnings;
};

struct EpisodeOptions {
  bool check_q_ceiling = false;
};

RegretTrace run_episode(const Experiment& exp, const PolicyConfig& policy,
                        const NoiseModel& noise, std::uint64_t master_seed,
                        std::size_t repetition, const EpisodeOptions& options = {});
RegretTrace run_episode(const RunConfig& cfg, std::size_t repetition = 0);

struct AggregateResult {
  std::string key;
  std::vector<double> regrets;  // indexed by repetition
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one repetition
  std::size_t repetitions = 0;
  std::vector<double> mean_curve;  // per-round mean of cum_regret
};

AggregateResult aggregate(std::string key, const std::vector<RegretTrace>& traces);

struct BatchOptions {
  std::size_t threads = 1;
  bool keep_traces = false;
  EpisodeOptions episode;
};

struct BatchResult {
  AggregateResult aggregate;
  std::vector<RegretTrace> traces;  // empty unless keep_traces
};

BatchResult run_batch(const Experiment& exp, const RunConfig& cfg, std::size_t n_reps,
                      const BatchOptions& options = {});
BatchResult run_batch(const RunConfig& cfg, std::size_t n_reps,
                      const BatchOptions& options = {});

// Exp3-IXt and Exp3-IXb at every eps, plus eps-independent Exp3-WIX and Exp3
// rows, all with cfg's rate schedule. Keys: "exp3-ixt@<eps>", "exp3-ixb@<eps>",
// "exp3-wix", "exp3".
std::vector<AggregateResult> sweep_epsilon(const RunConfig& cfg,
                                           const std::vector<double>& eps_list,
                                           std::size_t n_reps,
                                           const BatchOptions& options = {});

struct AlphaScatterRow {
  std::size_t n;
  std::size_t index;
  std::uint64_t seed;  // graph generator seed
  double alpha_star;   // NaN when the search ran out of budget
  double epsilon_star;
  bool budget_exceeded;
};

struct AlphaExperimentOptions {
  AlphaStarOptions alpha{MisOptions{}, false};
  std::size_t threads = 1;
};

std::vector<AlphaScatterRow> random_alpha_experiment(
    const std::vector<std::size_t>& sizes, double lo, double hi,
    std::size_t graphs_per_size, std::uint64_t seed,
    const AlphaExperimentOptions& options = {});

// 2 sqrt(2 (1 + R + R^2) (N + sum_t Q_t) log N) on the trace's realized Q_t.
double theoretical_bound(const RegretTrace& trace, std::size_t n, double noise_bound);

std::string format_epsilon_key(const std::string& policy, double eps);

}  // namespace sideobs
