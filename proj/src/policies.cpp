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

#include "sideobs/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sideobs/error.hpp"
#include "sideobs/kernels.hpp"

namespace sideobs {
namespace {

// Exponents below this are clamped so every probability stays positive.
constexpr double kMinExponent = -700.0;

// Estimator-specific matrices for one graph. denom(j,i) is the weight arm j
// contributes to arm i's observation probability; scale(I,i) multiplies c_i
// when I was played.
struct EstimatorTables {
  std::size_t n = 0;
  std::vector<double> denom;
  std::vector<double> scale;

  std::span<const double> scale_row(std::size_t chosen) const {
    return std::span<const double>(scale).subspan(chosen * n, n);
  }
};

EstimatorTables make_tables(const ObservationGraph& g, const EstimatorConfig& config) {
  config.validate();
  EstimatorTables t;
  t.n = g.size();
  const auto s = g.weights();
  t.denom.resize(s.size());
  t.scale.resize(s.size());
  switch (config.kind) {
    case EstimatorKind::kBasic:
      std::copy(s.begin(), s.end(), t.denom.begin());
      std::fill(t.scale.begin(), t.scale.end(), 1.0);
      break;
    case EstimatorKind::kTruncated:
      kernels::active().threshold_keep(s, config.epsilon, t.denom);
      for (std::size_t k = 0; k < s.size(); ++k) {
        t.scale[k] = s[k] >= config.epsilon ? 1.0 : 0.0;
      }
      break;
    case EstimatorKind::kWeighted:
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (config.delta == 1.0) {
          t.scale[k] = s[k];
          t.denom[k] = s[k] * s[k];
        } else {
          t.scale[k] = std::pow(s[k], config.delta);
          t.denom[k] = std::pow(s[k], 1.0 + config.delta);
        }
      }
      break;
  }
  return t;
}

void check_distribution(const ActionDistribution& p, std::size_t n) {
  require(p.p.size() == n, ErrorCode::kInvalidInput,
          "distribution length does not match the graph");
}

void denominators(const EstimatorTables& t, std::span<const double> p, double gamma,
                  std::span<double> out) {
  kernels::active().column_sums(p, t.denom, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] + gamma > 0.0)) {
      fail(ErrorCode::kDegenerateGraph,
           "arm " + std::to_string(i) + " has zero observation probability");
    }
  }
}

void estimate_into(const EstimatorTables& t, std::span<const double> p,
                   std::size_t chosen, std::span<const double> feedback, double gamma,
                   std::span<double> denom, std::span<double> out) {
  require(chosen < t.n, ErrorCode::kInvalidInput, "chosen arm out of range");
  require(feedback.size() == t.n, ErrorCode::kInvalidInput,
          "feedback length does not match the graph");
  require(gamma >= 0.0, ErrorCode::kInvalidParameter, "gamma must be non-negative");
  denominators(t, p, gamma, denom);
  kernels::active().scaled_ratio(t.scale_row(chosen), feedback, denom, gamma, out);
}

double q_from_denominators(std::span<const double> p, std::span<const double> denom,
                           double gamma, std::span<double> terms) {
  kernels::active().ratio(p, denom, gamma, terms);
  double q = 0.0;
  for (double x : terms) q += x;
  return q;
}

std::vector<double> estimate_with(const EstimatorConfig& config,
                                  const ActionDistribution& p, const ObservationGraph& g,
                                  std::size_t chosen, std::span<const double> feedback,
                                  double gamma) {
  check_distribution(p, g.size());
  const EstimatorTables t = make_tables(g, config);
  std::vector<double> denom(g.size());
  std::vector<double> out(g.size());
  estimate_into(t, p.p, chosen, feedback, gamma, denom, out);
  return out;
}

Rates rates_from_q_sum(double q_sum, std::size_t n, double r) {
  const double nn = static_cast<double>(n);
  const double eta = std::sqrt(std::log(nn) / (2.0 * (1.0 + r + r * r) * (nn + q_sum)));
  return {eta, r * eta};
}

}  // namespace

ActionDistribution action_distribution(std::span<const double> cumulative, double eta) {
  require(eta > 0.0 && std::isfinite(eta), ErrorCode::kInvalidInput,
          "learning rate must be positive and finite");
  require(!cumulative.empty(), ErrorCode::kInvalidInput, "no arms");
  double lo = std::numeric_limits<double>::infinity();
  for (double x : cumulative) {
    require(std::isfinite(x), ErrorCode::kInvalidInput, "non-finite loss estimate");
    lo = std::min(lo, x);
  }
  ActionDistribution out;
  out.p.resize(cumulative.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    out.p[i] = std::exp(std::max(-eta * (cumulative[i] - lo), kMinExponent));
    total += out.p[i];
  }
  for (double& x : out.p) x /= total;
  return out;
}

std::size_t sample_arm(const ActionDistribution& dist, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    acc += dist.p[i];
    if (u < acc) return i;
  }
  // Rounding left u above the final partial sum.
  return dist.p.size() - 1;
}

void EstimatorConfig::validate() const {
  switch (kind) {
    case EstimatorKind::kBasic:
      break;
    case EstimatorKind::kTruncated:
      require(epsilon >= 0.0 && epsilon <= 1.0, ErrorCode::kInvalidParameter,
              "truncation threshold must lie in [0,1]");
      break;
    case EstimatorKind::kWeighted:
      require(delta >= 1.0 && std::isfinite(delta), ErrorCode::kInvalidParameter,
              "weight exponent delta must be >= 1");
      break;
  }
}

std::vector<double> estimate_basic(const ActionDistribution& p, const ObservationGraph& g,
                                   std::size_t chosen, std::span<const double> feedback,
                                   double gamma) {
  return estimate_with({EstimatorKind::kBasic, 0.0, 1.0}, p, g, chosen, feedback, gamma);
}

std::vector<double> estimate_truncated(const ActionDistribution& p,
                                       const ObservationGraph& g, std::size_t chosen,
                                       std::span<const double> feedback, double gamma,
                                       double epsilon) {
  return estimate_with({EstimatorKind::kTruncated, epsilon, 1.0}, p, g, chosen, feedback,
                       gamma);
}

std::vector<double> estimate_weighted(const ActionDistribution& p,
                                      const ObservationGraph& g, std::size_t chosen,
                                      std::span<const double> feedback, double gamma,
                                      double delta) {
  return estimate_with({EstimatorKind::kWeighted, 0.0, delta}, p, g, chosen, feedback,
                       gamma);
}

std::vector<double> estimate(const EstimatorConfig& config, const ActionDistribution& p,
                             const ObservationGraph& g, std::size_t chosen,
                             std::span<const double> feedback, double gamma) {
  return estimate_with(config, p, g, chosen, feedback, gamma);
}

double compute_q(const ActionDistribution& p, const ObservationGraph& g, double gamma,
                 const EstimatorConfig& config) {
  check_distribution(p, g.size());
  require(gamma >= 0.0, ErrorCode::kInvalidParameter, "gamma must be non-negative");
  const EstimatorTables t = make_tables(g, config);
  std::vector<double> denom(g.size());
  std::vector<double> terms(g.size());
  denominators(t, p.p, gamma, denom);
  return q_from_denominators(p.p, denom, gamma, terms);
}

Rates adaptive_rates(std::span<const double> q_history, std::size_t n,
                     double noise_bound) {
  require(n >= 2, ErrorCode::kInvalidParameter,
          "adaptive rates need at least two arms (log N = 0 otherwise)");
  require(noise_bound >= 0.0, ErrorCode::kInvalidParameter, "R must be non-negative");
  double q_sum = 0.0;
  for (double q : q_history) {
    require(q >= 0.0, ErrorCode::kInvalidParameter, "Q values must be non-negative");
    q_sum += q;
  }
  return rates_from_q_sum(q_sum, n, noise_bound);
}

ObservationGraph ixb_transform(const ObservationGraph& g, double eps) {
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::kInvalidParameter,
          "binarization threshold must lie in [0,1]");
  std::vector<double> w(g.weights().begin(), g.weights().end());
  for (double& x : w) {
    const bool keep = eps > 0.0 ? x >= eps : x > 0.0;
    x = keep ? 1.0 : 0.0;
  }
  return ObservationGraph(g.size(), std::move(w),
                          g.diagonal() == 1.0 ? DiagonalRule::kUnit
                                              : DiagonalRule::kConstant);
}

RateSchedule RateSchedule::adaptive(double noise_bound) {
  RateSchedule r;
  r.mode = Mode::kAdaptive;
  r.noise_bound = noise_bound;
  return r;
}

RateSchedule RateSchedule::fixed(double eta, double gamma, double noise_bound) {
  RateSchedule r;
  r.mode = Mode::kStatic;
  r.eta = eta;
  r.gamma = gamma;
  r.noise_bound = noise_bound;
  return r;
}

void RateSchedule::validate() const {
  require(noise_bound >= 0.0 && std::isfinite(noise_bound),
          ErrorCode::kInvalidParameter, "R must be a finite non-negative number");
  if (mode == Mode::kStatic) {
    require(eta > 0.0 && std::isfinite(eta), ErrorCode::kInvalidParameter,
            "static learning rate must be positive");
    require(gamma >= 0.0 && std::isfinite(gamma), ErrorCode::kInvalidParameter,
            "static IX parameter must be non-negative");
  }
}

void PolicyConfig::validate() const {
  estimator.validate();
  rates.validate();
  if (view == ObservationView::kBinarized) {
    require(view_epsilon >= 0.0 && view_epsilon <= 1.0, ErrorCode::kInvalidParameter,
            "binarization threshold must lie in [0,1]");
  }
}

PolicyConfig PolicyConfig::exp3(RateSchedule rates) {
  return {"exp3", {EstimatorKind::kBasic, 0.0, 1.0}, ObservationView::kBandit, 1.0, rates};
}

PolicyConfig PolicyConfig::exp3_ix(RateSchedule rates) {
  return {"exp3-ix", {EstimatorKind::kBasic, 0.0, 1.0}, ObservationView::kFull, 1.0, rates};
}

PolicyConfig PolicyConfig::exp3_ixb(double eps, RateSchedule rates) {
  return {"exp3-ixb", {EstimatorKind::kBasic, 0.0, 1.0}, ObservationView::kBinarized, eps,
          rates};
}

PolicyConfig PolicyConfig::exp3_ixt(double eps, RateSchedule rates) {
  return {"exp3-ixt", {EstimatorKind::kTruncated, eps, 1.0}, ObservationView::kFull, 1.0,
          rates};
}

PolicyConfig PolicyConfig::exp3_wix(RateSchedule rates, double delta) {
  return {"exp3-wix", {EstimatorKind::kWeighted, 0.0, delta}, ObservationView::kFull, 1.0,
          rates};
}

struct Policy::Tables {
  EstimatorTables estimator;
  // View weights for masking feedback; empty for the full view.
  std::vector<double> view;
};

Policy::Policy(std::size_t arms, PolicyConfig config)
    : config_(std::move(config)),
      cumulative_(arms, 0.0),
      scratch_denom_(arms),
      scratch_terms_(arms) {
  require(arms >= 1, ErrorCode::kInvalidParameter, "policy needs at least one arm");
  config_.validate();
  if (config_.rates.mode == RateSchedule::Mode::kAdaptive) {
    require(arms >= 2, ErrorCode::kInvalidParameter,
            "adaptive rates need at least two arms");
  } else if (config_.rates.gamma < config_.rates.eta * config_.rates.noise_bound) {
    warnings_.push_back("static rates violate gamma >= eta * R (gamma=" +
                        std::to_string(config_.rates.gamma) +
                        ", eta*R=" +
                        std::to_string(config_.rates.eta * config_.rates.noise_bound) +
                        "); estimates may fall below -1/eta");
  }
}

const Policy::Tables& Policy::tables_for(const ObservationGraph& g) {
  const auto w = g.weights();
  if (cached_ && std::equal(w.begin(), w.end(), cached_source_.begin(),
                            cached_source_.end())) {
    return *cached_;
  }
  auto t = std::make_shared<Tables>();
  switch (config_.view) {
    case ObservationView::kFull:
      t->estimator = make_tables(g, config_.estimator);
      break;
    case ObservationView::kBandit: {
      const ObservationGraph view = ObservationGraph::identity(g.size());
      t->estimator = make_tables(view, config_.estimator);
      t->view.assign(view.weights().begin(), view.weights().end());
      break;
    }
    case ObservationView::kBinarized: {
      const ObservationGraph view = ixb_transform(g, config_.view_epsilon);
      t->estimator = make_tables(view, config_.estimator);
      t->view.assign(view.weights().begin(), view.weights().end());
      break;
    }
  }
  cached_source_.assign(w.begin(), w.end());
  cached_ = std::move(t);
  return *cached_;
}

std::size_t Policy::play(Rng& rng) {
  require(!pending_.has_value(), ErrorCode::kProtocolViolation,
          "play called twice without ingesting feedback");
  if (config_.rates.mode == RateSchedule::Mode::kAdaptive) {
    rates_ = rates_from_q_sum(q_sum_, arms(), config_.rates.noise_bound);
  } else {
    rates_ = {config_.rates.eta, config_.rates.gamma};
  }
  dist_ = action_distribution(cumulative_, rates_.eta);
  pending_ = sample_arm(dist_, rng);
  return *pending_;
}

IngestRecord Policy::ingest(const ObservationGraph& g, std::span<const double> feedback) {
  require(pending_.has_value(), ErrorCode::kProtocolViolation,
          "feedback received before an arm was played");
  require(g.size() == arms(), ErrorCode::kInvalidInput,
          "graph size does not match the number of arms");
  require(feedback.size() == arms(), ErrorCode::kInvalidInput,
          "feedback length does not match the number of arms");
  const std::size_t chosen = *pending_;
  const Tables& t = tables_for(g);

  std::vector<double> observed(feedback.begin(), feedback.end());
  if (!t.view.empty()) {
    // Observations the view discards are treated as never received.
    const auto mask = std::span<const double>(t.view).subspan(chosen * arms(), arms());
    for (std::size_t i = 0; i < arms(); ++i) observed[i] *= mask[i];
  }

  IngestRecord rec;
  rec.eta = rates_.eta;
  rec.gamma = rates_.gamma;
  rec.estimates.resize(arms());
  estimate_into(t.estimator, dist_.p, chosen, observed, rates_.gamma, scratch_denom_,
                rec.estimates);
  rec.q = q_from_denominators(dist_.p, scratch_denom_, rates_.gamma, scratch_terms_);
  rec.min_scaled_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < arms(); ++i) {
    cumulative_[i] += rec.estimates[i];
    rec.min_scaled_estimate = std::min(rec.min_scaled_estimate, rates_.eta * rec.estimates[i]);
  }
  q_history_.push_back(rec.q);
  q_sum_ += rec.q;
  eta_history_.push_back(rates_.eta);
  pending_.reset();
  ++round_;
  return rec;
}

}  // namespace sideobs
