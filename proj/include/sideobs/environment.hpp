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

// The environment side of the protocol: an oblivious loss sequence, a
// (possibly per-round) observation graph, bounded zero-mean noise, and the
// feedback c_i = s(I,i) * l_i + (1 - s(I,i)) * xi_i returned after each play.

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "sideobs/graph.hpp"
#include "sideobs/rng.hpp"

namespace sideobs {

enum class NoiseKind {
  kUniformSymmetric,  // U[-R, R]
  kRademacherScaled,  // +-R with probability 1/2 each
  kZero,
};

struct NoiseModel {
  double bound = 1.0;  // R
  NoiseKind kind = NoiseKind::kUniformSymmetric;

  void validate() const;
  void sample(Rng& rng, std::span<double> out) const;
};

// T x N matrix of losses in [0,1]; rounds are 0-based here.
class LossSequence {
 public:
  LossSequence(std::size_t horizon, std::size_t arms, std::vector<double> values);

  std::size_t horizon() const { return horizon_; }
  std::size_t arms() const { return arms_; }
  double at(std::size_t t, std::size_t arm) const { return values_[t * arms_ + arm]; }
  std::span<const double> round(std::size_t t) const {
    return std::span<const double>(values_).subspan(t * arms_, arms_);
  }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const LossSequence&, const LossSequence&) = default;

 private:
  std::size_t horizon_;
  std::size_t arms_;
  std::vector<double> values_;
};

enum class Interleave {
  kRotate,  // arm i at round t follows walk (i + t) mod walks
  kFixed,   // arm i follows walk i mod walks
};

// n_walks Gaussian random walks started at U(0,1), increments N(0, sigma^2),
// clipped to [0,1] after every step, distributed over the arms by the
// interleaving rule.
LossSequence gen_random_walk_losses(std::size_t n_arms, std::size_t n_walks,
                                    std::size_t horizon, double step_sigma, Rng& rng,
                                    Interleave interleave = Interleave::kFixed);

// Feedback for every arm when `chosen` is played.
std::vector<double> emit_feedback(const ObservationGraph& g,
                                  std::span<const double> losses, std::size_t chosen,
                                  std::span<const double> noise);
void emit_feedback(const ObservationGraph& g, std::span<const double> losses,
                   std::size_t chosen, std::span<const double> noise,
                   std::span<double> out);

// One graph for all rounds, or one per round.
class GraphSchedule {
 public:
  explicit GraphSchedule(std::shared_ptr<const ObservationGraph> graph);
  explicit GraphSchedule(std::vector<std::shared_ptr<const ObservationGraph>> per_round);

  const ObservationGraph& at(std::size_t t) const;
  const std::shared_ptr<const ObservationGraph>& shared_at(std::size_t t) const;
  std::size_t arms() const { return graphs_.front()->size(); }
  std::size_t length() const { return graphs_.size(); }
  bool is_static() const { return graphs_.size() == 1; }

 private:
  std::vector<std::shared_ptr<const ObservationGraph>> graphs_;
};

struct EnvironmentStep {
  std::size_t round;  // 1-based
  std::size_t action;
  std::shared_ptr<const ObservationGraph> graph;
  std::vector<double> loss;
  std::vector<double> noise;
  std::vector<double> feedback;

  friend bool operator==(const EnvironmentStep&, const EnvironmentStep&) = default;
};

class Environment {
 public:
  Environment(std::shared_ptr<const LossSequence> losses, GraphSchedule graphs,
              NoiseModel noise, Rng noise_rng);

  std::size_t arms() const { return losses_->arms(); }
  std::size_t horizon() const { return losses_->horizon(); }
  // 1-based index of the next round to be played.
  std::size_t next_round() const { return t_ + 1; }
  const NoiseModel& noise_model() const { return noise_; }
  const GraphSchedule& graphs() const { return graphs_; }

  // Plays `action` in the current round: returns the incurred loss and the
  // full record, then advances. Throws kHorizonExceeded after round T.
  std::pair<double, EnvironmentStep> step(std::size_t action);

 private:
  std::shared_ptr<const LossSequence> losses_;
  GraphSchedule graphs_;
  NoiseModel noise_;
  Rng rng_;
  std::size_t t_ = 0;
};

}  // namespace sideobs
