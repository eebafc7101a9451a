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

#include "sideobs/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sideobs/error.hpp"
#include "sideobs/kernels.hpp"

namespace sideobs {

void NoiseModel::validate() const {
  require(std::isfinite(bound) && bound >= 0.0, ErrorCode::kInvalidParameter,
          "noise bound R must be a finite non-negative number");
}

void NoiseModel::sample(Rng& rng, std::span<double> out) const {
  switch (kind) {
    case NoiseKind::kUniformSymmetric:
      for (double& x : out) x = bound * (2.0 * uniform01(rng) - 1.0);
      break;
    case NoiseKind::kRademacherScaled:
      for (double& x : out) x = (rng() >> 63) != 0 ? bound : -bound;
      break;
    case NoiseKind::kZero:
      std::fill(out.begin(), out.end(), 0.0);
      break;
  }
}

LossSequence::LossSequence(std::size_t horizon, std::size_t arms,
                           std::vector<double> values)
    : horizon_(horizon), arms_(arms), values_(std::move(values)) {
  require(values_.size() == horizon_ * arms_, ErrorCode::kInvalidInput,
          "loss matrix has " + std::to_string(values_.size()) + " entries, expected " +
              std::to_string(horizon_ * arms_));
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(ErrorCode::kInvalidInput,
           "loss at round " + std::to_string(k / arms_ + 1) + ", arm " +
               std::to_string(k % arms_) + " is outside [0,1]");
    }
  }
}

LossSequence gen_random_walk_losses(std::size_t n_arms, std::size_t n_walks,
                                    std::size_t horizon, double step_sigma, Rng& rng,
                                    Interleave interleave) {
  require(n_arms >= 1, ErrorCode::kInvalidParameter, "need at least one arm");
  require(n_walks >= 1, ErrorCode::kInvalidParameter, "need at least one walk");
  require(horizon >= 1, ErrorCode::kInvalidParameter, "horizon must be positive");
  require(step_sigma > 0.0 && std::isfinite(step_sigma), ErrorCode::kInvalidParameter,
          "step_sigma must be positive");

  std::vector<double> walk(n_walks);
  for (double& w : walk) w = uniform01(rng);
  std::normal_distribution<double> step(0.0, step_sigma);

  std::vector<double> values(horizon * n_arms);
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t > 0) {
      for (double& w : walk) w = std::clamp(w + step(rng), 0.0, 1.0);
    }
    for (std::size_t i = 0; i < n_arms; ++i) {
      const std::size_t shift = interleave == Interleave::kRotate ? t : 0;
      values[t * n_arms + i] = walk[(i + shift) % n_walks];
    }
  }
  return LossSequence(horizon, n_arms, std::move(values));
}

void emit_feedback(const ObservationGraph& g, std::span<const double> losses,
                   std::size_t chosen, std::span<const double> noise,
                   std::span<double> out) {
  const std::size_t n = g.size();
  require(losses.size() == n && noise.size() == n && out.size() == n,
          ErrorCode::kInvalidInput, "feedback vectors must match the graph size");
  require(chosen < n, ErrorCode::kInvalidInput, "chosen arm out of range");
  kernels::active().mix_feedback(g.row(chosen), losses, noise, out);
}

std::vector<double> emit_feedback(const ObservationGraph& g,
                                  std::span<const double> losses, std::size_t chosen,
                                  std::span<const double> noise) {
  std::vector<double> out(losses.size());
  emit_feedback(g, losses, chosen, noise, out);
  return out;
}

GraphSchedule::GraphSchedule(std::shared_ptr<const ObservationGraph> graph) {
  require(graph != nullptr, ErrorCode::kInvalidInput, "null graph");
  graphs_.push_back(std::move(graph));
}

GraphSchedule::GraphSchedule(std::vector<std::shared_ptr<const ObservationGraph>> per_round)
    : graphs_(std::move(per_round)) {
  require(!graphs_.empty(), ErrorCode::kInvalidInput, "empty graph schedule");
  for (const auto& g : graphs_) {
    require(g != nullptr && g->size() == graphs_.front()->size(),
            ErrorCode::kInvalidInput, "graph schedule mixes arm counts");
  }
}

const std::shared_ptr<const ObservationGraph>& GraphSchedule::shared_at(std::size_t t) const {
  return is_static() ? graphs_.front() : graphs_.at(t);
}

const ObservationGraph& GraphSchedule::at(std::size_t t) const { return *shared_at(t); }

Environment::Environment(std::shared_ptr<const LossSequence> losses, GraphSchedule graphs,
                         NoiseModel noise, Rng noise_rng)
    : losses_(std::move(losses)),
      graphs_(std::move(graphs)),
      noise_(noise),
      rng_(std::move(noise_rng)) {
  require(losses_ != nullptr, ErrorCode::kInvalidInput, "null loss sequence");
  require(graphs_.arms() == losses_->arms(), ErrorCode::kInvalidInput,
          "graph and loss sequence disagree on the number of arms");
  require(graphs_.is_static() || graphs_.length() >= losses_->horizon(),
          ErrorCode::kInvalidInput, "graph schedule shorter than the horizon");
  noise_.validate();
}

std::pair<double, EnvironmentStep> Environment::step(std::size_t action) {
  require(t_ < horizon(), ErrorCode::kHorizonExceeded,
          "round " + std::to_string(t_ + 1) + " is past the horizon " +
              std::to_string(horizon()));
  require(action < arms(), ErrorCode::kInvalidInput, "action out of range");

  EnvironmentStep rec;
  rec.round = t_ + 1;
  rec.action = action;
  rec.graph = graphs_.shared_at(t_);
  const auto losses = losses_->round(t_);
  rec.loss.assign(losses.begin(), losses.end());
  rec.noise.resize(arms());
  noise_.sample(rng_, rec.noise);
  rec.feedback.resize(arms());
  emit_feedback(*rec.graph, rec.loss, action, rec.noise, rec.feedback);

  const double incurred = rec.loss[action];
  ++t_;
  return {incurred, std::move(rec)};
}

}  // namespace sideobs
