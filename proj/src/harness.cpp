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

#include "sideobs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "sideobs/error.hpp"
#include "sideobs/io.hpp"

namespace sideobs {

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    require(ok, ErrorCode::kValidation, msg);
  };
  check(arms >= 2, "arms must be at least 2");
  check(horizon >= 1, "horizon must be at least 1");
  check(repetitions >= 1, "repetitions must be at least 1");
  try {
    policy.validate();
    noise.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kValidation, e.what());
  }
  switch (graph.kind) {
    case GraphSpec::Kind::kGrid:
      check(graph.k >= 1, "grid side must be at least 1");
      check(graph.k * graph.k == arms, "grid of side " + std::to_string(graph.k) +
                                           " has " + std::to_string(graph.k * graph.k) +
                                           " nodes but arms = " + std::to_string(arms));
      break;
    case GraphSpec::Kind::kRandomUniform:
      check(0.0 <= graph.lo && graph.lo <= graph.hi && graph.hi <= 1.0,
            "graph weight range must satisfy 0 <= lo <= hi <= 1");
      break;
    case GraphSpec::Kind::kIdentity:
      break;
    case GraphSpec::Kind::kFile:
      check(!graph.path.empty(), "graph file path is empty");
      break;
  }
  if (losses.kind == LossSpec::Kind::kRandomWalk) {
    check(losses.walks >= 1, "need at least one random walk");
    check(losses.sigma > 0.0, "random-walk sigma must be positive");
  } else {
    check(!losses.path.empty(), "loss file path is empty");
  }
}

Experiment prepare_experiment(const RunConfig& cfg, bool with_alpha_star) {
  cfg.validate();
  Experiment exp;

  switch (cfg.graph.kind) {
    case GraphSpec::Kind::kGrid:
      exp.graph = std::make_shared<const ObservationGraph>(
          gen_grid_geometric(cfg.graph.k, cfg.graph.rule, cfg.graph.spacing));
      break;
    case GraphSpec::Kind::kRandomUniform: {
      Rng rng = make_rng(cfg.seed, Stream::kGraph);
      exp.graph = std::make_shared<const ObservationGraph>(
          gen_random_uniform(cfg.arms, cfg.graph.lo, cfg.graph.hi, rng));
      break;
    }
    case GraphSpec::Kind::kIdentity:
      exp.graph = std::make_shared<const ObservationGraph>(ObservationGraph::identity(cfg.arms));
      break;
    case GraphSpec::Kind::kFile:
      exp.graph = std::make_shared<const ObservationGraph>(load_graph(cfg.graph.path));
      break;
  }
  require(exp.graph->size() == cfg.arms, ErrorCode::kValidation,
          "graph has " + std::to_string(exp.graph->size()) + " nodes but arms = " +
              std::to_string(cfg.arms));

  if (cfg.losses.kind == LossSpec::Kind::kRandomWalk) {
    Rng rng = make_rng(cfg.seed, Stream::kLosses);
    exp.losses = std::make_shared<const LossSequence>(
        gen_random_walk_losses(cfg.arms, cfg.losses.walks, cfg.horizon, cfg.losses.sigma,
                               rng, cfg.losses.interleave));
  } else {
    exp.losses = std::make_shared<const LossSequence>(load_losses(cfg.losses.path));
  }
  require(exp.losses->arms() == cfg.arms && exp.losses->horizon() == cfg.horizon,
          ErrorCode::kValidation, "loss sequence shape does not match arms x horizon");

  if (with_alpha_star) {
    exp.alpha_star = effective_independence_number(*exp.graph).alpha_star;
  }
  return exp;
}

RegretTrace run_episode(const Experiment& exp, const PolicyConfig& policy_config,
                        const NoiseModel& noise, std::uint64_t master_seed,
                        std::size_t repetition, const EpisodeOptions& options) {
  const std::size_t n = exp.losses->arms();
  const std::size_t horizon = exp.losses->horizon();
  Environment env(exp.losses, GraphSchedule(exp.graph), noise,
                  make_rng(master_seed, Stream::kNoise, repetition));
  Policy policy(n, policy_config);
  Rng sampling = make_rng(master_seed, Stream::kSampling, repetition);

  const bool check_q = options.check_q_ceiling && exp.alpha_star.has_value() &&
                       policy_config.estimator.kind == EstimatorKind::kWeighted &&
                       policy_config.view == ObservationView::kFull;

  RegretTrace trace;
  trace.rounds.reserve(horizon);
  trace.arm_totals.assign(n, 0.0);
  double cum_loss = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t arm = policy.play(sampling);
    auto [loss, step] = env.step(arm);
    const IngestRecord rec = policy.ingest(*step.graph, step.feedback);

    cum_loss += loss;
    for (std::size_t i = 0; i < n; ++i) trace.arm_totals[i] += step.loss[i];
    const double best = *std::min_element(trace.arm_totals.begin(), trace.arm_totals.end());
    trace.rounds.push_back({arm, loss, cum_loss, cum_loss - best, rec.q, rec.eta, rec.gamma,
                            rec.min_scaled_estimate});

    if (check_q && rec.gamma > 0.0) {
      ++trace.q_ceiling_checks;
      if (rec.q > q_upper_bound(*exp.alpha_star, n, rec.gamma)) ++trace.q_ceiling_violations;
    }
  }
  trace.learner_total = cum_loss;
  trace.final_regret = trace.rounds.empty() ? 0.0 : trace.rounds.back().cum_regret;
  trace.warnings = policy.warnings();
  return trace;
}

RegretTrace run_episode(const RunConfig& cfg, std::size_t repetition) {
  const Experiment exp = prepare_experiment(cfg);
  return run_episode(exp, cfg.policy, cfg.noise, cfg.seed, repetition);
}

AggregateResult aggregate(std::string key, const std::vector<RegretTrace>& traces) {
  AggregateResult out;
  out.key = std::move(key);
  out.repetitions = traces.size();
  if (traces.empty()) return out;
  for (const RegretTrace& t : traces) out.regrets.push_back(t.final_regret);
  const double reps = static_cast<double>(traces.size());
  out.mean = std::accumulate(out.regrets.begin(), out.regrets.end(), 0.0) / reps;
  if (traces.size() > 1) {
    double ss = 0.0;
    for (double r : out.regrets) ss += (r - out.mean) * (r - out.mean);
    out.stddev = std::sqrt(ss / (reps - 1.0));
  }
  const std::size_t horizon = traces.front().rounds.size();
  out.mean_curve.assign(horizon, 0.0);
  for (const RegretTrace& t : traces) {
    for (std::size_t r = 0; r < horizon; ++r) out.mean_curve[r] += t.rounds[r].cum_regret;
  }
  for (double& v : out.mean_curve) v /= reps;
  return out;
}

BatchResult run_batch(const Experiment& exp, const RunConfig& cfg, std::size_t n_reps,
                      const BatchOptions& options) {
  require(n_reps >= 1, ErrorCode::kValidation, "need at least one repetition");
  std::vector<RegretTrace> traces(n_reps);
  detail::parallel_for(n_reps, options.threads, [&](std::size_t rep) {
    traces[rep] = run_episode(exp, cfg.policy, cfg.noise, cfg.seed, rep, options.episode);
  });
  BatchResult out;
  out.aggregate = aggregate(cfg.policy.name, traces);
  if (options.keep_traces) out.traces = std::move(traces);
  return out;
}

BatchResult run_batch(const RunConfig& cfg, std::size_t n_reps, const BatchOptions& options) {
  const Experiment exp = prepare_experiment(cfg, options.episode.check_q_ceiling);
  return run_batch(exp, cfg, n_reps, options);
}

std::string format_epsilon_key(const std::string& policy, double eps) {
  return policy + "@" + format_double(eps);
}

std::vector<AggregateResult> sweep_epsilon(const RunConfig& cfg,
                                           const std::vector<double>& eps_list,
                                           std::size_t n_reps,
                                           const BatchOptions& options) {
  for (double eps : eps_list) {
    require(eps >= 0.0 && eps <= 1.0, ErrorCode::kValidation,
            "sweep thresholds must lie in [0,1]");
  }
  const Experiment exp = prepare_experiment(cfg);
  const RateSchedule rates = cfg.policy.rates;

  struct Cell {
    std::string key;
    PolicyConfig policy;
  };
  std::vector<Cell> cells;
  for (double eps : eps_list) {
    cells.push_back({format_epsilon_key("exp3-ixt", eps), PolicyConfig::exp3_ixt(eps, rates)});
    cells.push_back({format_epsilon_key("exp3-ixb", eps), PolicyConfig::exp3_ixb(eps, rates)});
  }
  cells.push_back({"exp3-wix", PolicyConfig::exp3_wix(rates, cfg.policy.estimator.delta)});
  cells.push_back({"exp3", PolicyConfig::exp3(rates)});

  // Every (cell, repetition) pair is an independent job.
  const std::size_t jobs = cells.size() * n_reps;
  std::vector<RegretTrace> traces(jobs);
  detail::parallel_for(jobs, options.threads, [&](std::size_t job) {
    const Cell& cell = cells[job / n_reps];
    traces[job] = run_episode(exp, cell.policy, cfg.noise, cfg.seed, job % n_reps,
                              options.episode);
  });

  std::vector<AggregateResult> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<RegretTrace> slice(std::make_move_iterator(traces.begin() + c * n_reps),
                                   std::make_move_iterator(traces.begin() + (c + 1) * n_reps));
    out.push_back(aggregate(cells[c].key, slice));
  }
  return out;
}

std::vector<AlphaScatterRow> random_alpha_experiment(const std::vector<std::size_t>& sizes,
                                                     double lo, double hi,
                                                     std::size_t graphs_per_size,
                                                     std::uint64_t seed,
                                                     const AlphaExperimentOptions& options) {
  require(0.0 <= lo && lo <= hi && hi <= 1.0, ErrorCode::kInvalidParameter,
          "weight range must satisfy 0 <= lo <= hi <= 1");
  for (std::size_t n : sizes) {
    require(n >= 1, ErrorCode::kInvalidParameter, "graph sizes must be positive");
  }
  const std::size_t total = sizes.size() * graphs_per_size;
  std::vector<AlphaScatterRow> rows(total);
  detail::parallel_for(total, options.threads, [&](std::size_t job) {
    const std::size_t n = sizes[job / graphs_per_size];
    const std::size_t index = job % graphs_per_size;
    // Stream index mixes size and graph number so sizes never share graphs.
    const std::uint64_t graph_seed =
        derive_seed(seed, Stream::kAlphaGraphs, (static_cast<std::uint64_t>(n) << 32) | index);
    Rng rng(graph_seed);
    const ObservationGraph g = gen_random_uniform(n, lo, hi, rng);
    AlphaScatterRow row{n, index, graph_seed, std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(), false};
    try {
      const AlphaStarResult r = effective_independence_number(g, options.alpha);
      row.alpha_star = r.alpha_star;
      row.epsilon_star = r.epsilon_star;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExceeded) throw;
      row.budget_exceeded = true;
    }
    rows[job] = row;
  });
  return rows;
}

double theoretical_bound(const RegretTrace& trace, std::size_t n, double noise_bound) {
  require(!trace.rounds.empty(), ErrorCode::kInvalidInput, "trace has no Q history");
  require(n >= 2, ErrorCode::kInvalidParameter, "bound needs at least two arms");
  double q_sum = 0.0;
  for (const RoundRecord& r : trace.rounds) {
    require(std::isfinite(r.q), ErrorCode::kInvalidInput, "trace has no Q history");
    q_sum += r.q;
  }
  const double r = noise_bound;
  const double nn = static_cast<double>(n);
  return 2.0 * std::sqrt(2.0 * (1.0 + r + r * r) * (nn + q_sum) * std::log(nn));
}

}  // namespace sideobs
