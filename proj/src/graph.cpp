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

#include "sideobs/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <string>

#include "sideobs/error.hpp"

namespace sideobs {

void NodeSet::fill() {
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  if (const std::size_t tail = universe_ & 63; tail != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
}

std::size_t NodeSet::count() const {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool NodeSet::none() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::size_t NodeSet::first() const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] != 0) {
      return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    }
  }
  return universe_;
}

void NodeSet::assign_and(const NodeSet& a, const NodeSet& b) {
  universe_ = a.universe_;
  words_.resize(a.words_.size());
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] = a.words_[k] & b.words_[k];
}

void NodeSet::subtract(const NodeSet& other) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
}

ObservationGraph::ObservationGraph(std::size_t n, std::vector<double> weights,
                                   DiagonalRule rule)
    : n_(n), weights_(std::move(weights)) {
  require(weights_.size() == n_ * n_, ErrorCode::kInvalidInput,
          "weight matrix has " + std::to_string(weights_.size()) +
              " entries, expected " + std::to_string(n_ * n_));
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double w = weights_[k];
    if (!(w >= 0.0 && w <= 1.0)) {
      std::ostringstream msg;
      msg << "weight (" << k / n_ << "," << k % n_ << ") = " << w
          << " is outside [0,1]";
      fail(ErrorCode::kInvalidInput, msg.str());
    }
  }
  const double diag = diagonal();
  for (std::size_t i = 0; i < n_; ++i) {
    const double d = weight(i, i);
    const bool ok = rule == DiagonalRule::kUnit ? d == 1.0 : d == diag;
    if (!ok) {
      fail(ErrorCode::kInvalidInput,
           "diagonal weight of node " + std::to_string(i) +
               (rule == DiagonalRule::kUnit ? " must be 1"
                                            : " differs from the constant diagonal"));
    }
  }
}

ObservationGraph ObservationGraph::identity(std::size_t n) {
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
  return ObservationGraph(n, std::move(w));
}

double ObservationGraph::max_off_diagonal() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j) m = std::max(m, weight(i, j));
    }
  }
  return m;
}

BinaryDigraph::BinaryDigraph(std::size_t n) : out_(n, NodeSet(n)) {}

void BinaryDigraph::add_arc(std::size_t from, std::size_t to) {
  require(from < size() && to < size(), ErrorCode::kInvalidInput,
          "arc endpoint out of range");
  require(from != to, ErrorCode::kInvalidInput, "self-loops are not allowed");
  out_[from].set(to);
}

std::size_t BinaryDigraph::arc_count() const {
  std::size_t c = 0;
  for (const NodeSet& s : out_) c += s.count();
  return c;
}

std::vector<NodeSet> BinaryDigraph::symmetrized() const {
  std::vector<NodeSet> nbr = out_;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (out_[i].test(j)) nbr[j].set(i);
    }
  }
  return nbr;
}

BinaryDigraph threshold(const ObservationGraph& g, double eps) {
  require(eps > 0.0 && eps <= 1.0, ErrorCode::kInvalidParameter,
          "threshold must lie in (0,1]");
  const std::size_t n = g.size();
  BinaryDigraph out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && g.weight(i, j) >= eps) out.add_arc(i, j);
    }
  }
  return out;
}

AlphaStarResult effective_independence_number(const ObservationGraph& g,
                                              const AlphaStarOptions& options) {
  const std::size_t n = g.size();
  require(n >= 1, ErrorCode::kInvalidInput, "graph has no nodes");
  // Above the diagonal value a node stops observing itself, so the search
  // never goes past it. For the usual unit diagonal this is eps = 1.
  const double top = g.diagonal();
  require(top > 0.0, ErrorCode::kDegenerateGraph,
          "zero diagonal: no threshold yields a usable graph");

  std::vector<double> candidates{top};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = g.weight(i, j);
      if (i != j && w > 0.0 && w <= top) candidates.push_back(w);
    }
  }
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  AlphaStarResult result{0.0, 0.0, {}};
  bool have_best = false;
  for (double eps : candidates) {
    const double floor_ratio = 1.0 / (eps * eps);
    if (!options.full_curve && have_best && floor_ratio >= result.alpha_star) break;
    const std::size_t alpha = independence_number(threshold(g, eps), options.mis);
    const double ratio = static_cast<double>(alpha) / (eps * eps);
    result.curve.push_back({eps, alpha, ratio});
    // Descending scan with strict improvement keeps the largest minimizer.
    if (!have_best || ratio < result.alpha_star) {
      result.alpha_star = ratio;
      result.epsilon_star = eps;
      have_best = true;
    }
  }
  std::reverse(result.curve.begin(), result.curve.end());
  return result;
}

double q_upper_bound(double alpha_star, std::size_t n, double gamma) {
  require(gamma > 0.0, ErrorCode::kInvalidParameter, "gamma must be positive");
  require(alpha_star >= 1.0, ErrorCode::kInvalidParameter,
          "effective independence number is at least 1");
  const double nn = static_cast<double>(n);
  return 2.0 * alpha_star *
         (1.0 + std::log(1.0 + (nn * nn / gamma + nn * nn + nn) / alpha_star));
}

}  // namespace sideobs
