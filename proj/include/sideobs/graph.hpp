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

// Weighted observation graphs, their thresholded binary views, exact
// independence numbers and the effective independence number
//
//   alpha* = min over eps in (0,1] of alpha(G(eps)) / eps^2
//
// where G(eps) keeps the arc i->j iff s(i,j) >= eps.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sideobs/rng.hpp"

namespace sideobs {

// Fixed-universe bitset over graph nodes.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return universe_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void fill();

  std::size_t count() const;
  bool none() const;
  // Smallest member, or universe() if empty.
  std::size_t first() const;

  // this = a & b, without reallocating.
  void assign_and(const NodeSet& a, const NodeSet& b);
  void subtract(const NodeSet& other);

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class DiagonalRule {
  kUnit,      // s(i,i) == 1, the standard setting
  kConstant,  // s(i,i) == c for one c in [0,1]
};

class ObservationGraph {
 public:
  // weights is row-major n*n; entry (i,j) is the quality of the observation of
  // arm j when arm i is played. Throws kInvalidInput on out-of-range weights
  // or a diagonal that violates the rule.
  ObservationGraph(std::size_t n, std::vector<double> weights,
                   DiagonalRule rule = DiagonalRule::kUnit);

  static ObservationGraph identity(std::size_t n);

  std::size_t size() const { return n_; }
  double weight(std::size_t i, std::size_t j) const { return weights_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(weights_).subspan(i * n_, n_);
  }
  std::span<const double> weights() const { return weights_; }
  double diagonal() const { return n_ == 0 ? 1.0 : weights_[0]; }
  double max_off_diagonal() const;

  friend bool operator==(const ObservationGraph&, const ObservationGraph&) = default;

 private:
  std::size_t n_;
  std::vector<double> weights_;
};

// Directed graph without self-loops.
class BinaryDigraph {
 public:
  explicit BinaryDigraph(std::size_t n);

  std::size_t size() const { return out_.size(); }
  void add_arc(std::size_t from, std::size_t to);
  bool has_arc(std::size_t from, std::size_t to) const { return out_[from].test(to); }
  const NodeSet& out_arcs(std::size_t from) const { return out_[from]; }
  std::size_t arc_count() const;

  // Nodes joined to v by an arc in either direction.
  std::vector<NodeSet> symmetrized() const;

  friend bool operator==(const BinaryDigraph&, const BinaryDigraph&) = default;

 private:
  std::vector<NodeSet> out_;
};

// Arc i->j (i != j) iff s(i,j) >= eps. Requires 0 < eps <= 1.
BinaryDigraph threshold(const ObservationGraph& g, double eps);

struct MisOptions {
  // Branch-and-bound search nodes before giving up with kBudgetExceeded.
  std::uint64_t node_budget = 10'000'000;
};

// A maximum set of nodes with no arc in either direction between any two of
// its members. Exact; throws kBudgetExceeded if the search does not finish.
std::vector<std::size_t> maximum_independent_set(const BinaryDigraph& g,
                                                 const MisOptions& options = {});
std::size_t independence_number(const BinaryDigraph& g,
                                const MisOptions& options = {});

struct AlphaCurvePoint {
  double epsilon;
  std::size_t alpha;
  double ratio;  // alpha / epsilon^2
};

struct AlphaStarResult {
  double alpha_star;
  double epsilon_star;
  std::vector<AlphaCurvePoint> curve;  // ascending in epsilon
};

struct AlphaStarOptions {
  MisOptions mis;
  // When false, candidates that provably cannot beat the incumbent
  // (1/eps^2 >= best) are skipped and left out of the curve.
  bool full_curve = true;
};

// Candidates are the distinct positive off-diagonal weights not above the
// diagonal value, plus the diagonal value itself. Ties in the ratio go to the
// largest epsilon.
AlphaStarResult effective_independence_number(const ObservationGraph& g,
                                              const AlphaStarOptions& options = {});

enum class GridRule {
  kInvOnePlusD2,  // 1 / (1 + d^2)
  kMin3OverD2,    // min(3 / d^2, 1)
};

enum class GridSpacing {
  kDefault,     // unit square for kInvOnePlusD2, unit spacing for kMin3OverD2
  kUnit,        // neighbours at distance 1
  kUnitSquare,  // k x k points spanning [0,1]^2
};

ObservationGraph gen_grid_geometric(std::size_t k, GridRule rule,
                                    GridSpacing spacing = GridSpacing::kDefault);

// Off-diagonal weights i.i.d. U(lo, hi), each direction drawn separately.
ObservationGraph gen_random_uniform(std::size_t n, double lo, double hi, Rng& rng);

// Ceiling on Q_t from the effective independence number:
//   2 a (1 + log(1 + (n^2/gamma + n^2 + n) / a))
double q_upper_bound(double alpha_star, std::size_t n, double gamma);

}  // namespace sideobs
