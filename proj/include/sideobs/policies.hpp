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

// Exponential-weights learners for noisy side observations.
//
// All algorithms share one template: play from p_t proportional to
// exp(-eta_t * Lhat_{t-1}), observe the feedback vector, add a loss estimate
// to Lhat. They differ in the estimator, in the graph the learner looks
// through, and in how (eta_t, gamma_t) are set:
//
//   Exp3      basic estimator, bandit view (identity graph)
//   Exp3-IXb  basic estimator, graph binarized at eps
//   Exp3-IXt  truncated estimator at eps, full graph
//   Exp3-WIX  weighted estimator, full graph

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sideobs/graph.hpp"
#include "sideobs/rng.hpp"

namespace sideobs {

struct ActionDistribution {
  std::vector<double> p;
};

// Softmax of -eta * cumulative with the minimum shifted to zero.
ActionDistribution action_distribution(std::span<const double> cumulative, double eta);

// Inverse-CDF draw using a single uniform.
std::size_t sample_arm(const ActionDistribution& dist, Rng& rng);

enum class EstimatorKind {
  kBasic,      // c_i / (sum_j p_j s(j,i) + gamma)
  kTruncated,  // c_i 1{s(I,i)>=eps} / (sum_j p_j s(j,i) 1{s(j,i)>=eps} + gamma)
  kWeighted,   // s(I,i)^delta c_i / (sum_j p_j s(j,i)^(1+delta) + gamma)
};

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::kWeighted;
  double epsilon = 0.0;  // truncated only, in [0,1]
  double delta = 1.0;    // weighted only, >= 1

  void validate() const;
};

std::vector<double> estimate_basic(const ActionDistribution& p, const ObservationGraph& g,
                                   std::size_t chosen, std::span<const double> feedback,
                                   double gamma);
std::vector<double> estimate_truncated(const ActionDistribution& p,
                                       const ObservationGraph& g, std::size_t chosen,
                                       std::span<const double> feedback, double gamma,
                                       double epsilon);
std::vector<double> estimate_weighted(const ActionDistribution& p,
                                      const ObservationGraph& g, std::size_t chosen,
                                      std::span<const double> feedback, double gamma,
                                      double delta = 1.0);
std::vector<double> estimate(const EstimatorConfig& config, const ActionDistribution& p,
                             const ObservationGraph& g, std::size_t chosen,
                             std::span<const double> feedback, double gamma);

// Q = sum_i p_i / (denominator_i + gamma) with the estimator's denominator:
// s^(1+delta) for weighted, s 1{s>=eps} for truncated, s for basic.
// Throws kDegenerateGraph on a zero denominator.
double compute_q(const ActionDistribution& p, const ObservationGraph& g, double gamma,
                 const EstimatorConfig& config);

struct Rates {
  double eta;
  double gamma;
};

// eta_t = sqrt(log N / (2 (1 + R + R^2) (N + sum_{s<t} Q_s))), gamma_t = R eta_t.
Rates adaptive_rates(std::span<const double> q_history, std::size_t n, double noise_bound);

// Weights below eps become 0, the rest 1. eps = 0 is read as the limit
// eps -> 0+, i.e. every positive weight becomes 1.
ObservationGraph ixb_transform(const ObservationGraph& g, double eps);

enum class ObservationView {
  kFull,       // the learner uses the true graph
  kBandit,     // only the played arm is observed
  kBinarized,  // ixb_transform(G_t, view_epsilon)
};

struct RateSchedule {
  enum class Mode { kStatic, kAdaptive };
  Mode mode = Mode::kAdaptive;
  double eta = 0.1;     // static
  double gamma = 0.0;   // static
  double noise_bound = 1.0;  // R; sets gamma_t = R eta_t when adaptive

  static RateSchedule adaptive(double noise_bound);
  static RateSchedule fixed(double eta, double gamma, double noise_bound = 1.0);
  void validate() const;
};

struct PolicyConfig {
  std::string name;
  EstimatorConfig estimator;
  ObservationView view = ObservationView::kFull;
  double view_epsilon = 1.0;
  RateSchedule rates;

  void validate() const;

  static PolicyConfig exp3(RateSchedule rates);
  static PolicyConfig exp3_ix(RateSchedule rates);
  static PolicyConfig exp3_ixb(double eps, RateSchedule rates);
  static PolicyConfig exp3_ixt(double eps, RateSchedule rates);
  static PolicyConfig exp3_wix(RateSchedule rates, double delta = 1.0);
};

// What the learner did with one round's feedback.
struct IngestRecord {
  double eta;
  double gamma;
  double q;
  // min_i eta * lhat_i; the exponential-weights analysis needs >= -1.
  double min_scaled_estimate;
  std::vector<double> estimates;
};

class Policy {
 public:
  Policy(std::size_t arms, PolicyConfig config);

  const PolicyConfig& config() const { return config_; }
  std::size_t arms() const { return cumulative_.size(); }
  // 1-based round the next play belongs to.
  std::size_t round() const { return round_; }

  // Rates and distribution for the current round, then a sampled arm.
  // Throws kProtocolViolation if the previous play was not ingested.
  std::size_t play(Rng& rng);
  const ActionDistribution& distribution() const { return dist_; }
  Rates current_rates() const { return rates_; }

  // Consumes the feedback of the pending play. `g` is the round's true
  // graph; the configured view is applied here.
  IngestRecord ingest(const ObservationGraph& g, std::span<const double> feedback);

  std::span<const double> cumulative_estimates() const { return cumulative_; }
  std::span<const double> q_history() const { return q_history_; }
  std::span<const double> eta_history() const { return eta_history_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct Tables;
  const Tables& tables_for(const ObservationGraph& g);

  PolicyConfig config_;
  std::vector<double> cumulative_;
  std::vector<double> q_history_;
  std::vector<double> eta_history_;
  double q_sum_ = 0.0;
  std::vector<std::string> warnings_;
  ActionDistribution dist_;
  Rates rates_{0.0, 0.0};
  std::optional<std::size_t> pending_;
  std::size_t round_ = 1;

  // Per-graph precomputation, reused while the graph does not change.
  std::vector<double> cached_source_;
  std::shared_ptr<const Tables> cached_;
  std::vector<double> scratch_denom_;
  std::vector<double> scratch_terms_;
};

}  // namespace sideobs
