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

// Exact maximum independent set by branch and bound.
//
// Independent sets of G are cliques of the complement graph H, so this is a
// bitset maximum-clique search on H (MCQ/BBMC style). At every node the
// candidate set is greedily partitioned into colour classes of H, which are
// cliques of G: an independent set picks at most one node from each, so the
// number of classes bounds how much the current set can still grow.

#include <algorithm>
#include <numeric>
#include <string>

#include "sideobs/error.hpp"
#include "sideobs/graph.hpp"

namespace sideobs {
namespace {

class CliqueSearch {
 public:
  CliqueSearch(std::vector<NodeSet> adjacency, std::uint64_t budget)
      : adj_(std::move(adjacency)), budget_(budget) {
    const std::size_t n = adj_.size();
    levels_.assign(n + 1, NodeSet(n));
    order_.resize(n + 1);
    bounds_.resize(n + 1);
  }

  std::vector<std::size_t> run() {
    const std::size_t n = adj_.size();
    levels_[0].fill();
    // Greedy seed: a maximal clique grown from the highest-degree node.
    NodeSet cand = levels_[0];
    NodeSet tmp(n);
    while (!cand.none()) {
      std::size_t pick = cand.first();
      std::size_t pick_deg = 0;
      for (std::size_t v = pick; v < n; ++v) {
        if (!cand.test(v)) continue;
        tmp.assign_and(cand, adj_[v]);
        if (const std::size_t d = tmp.count(); d > pick_deg) {
          pick = v;
          pick_deg = d;
        }
      }
      current_.push_back(pick);
      tmp.assign_and(cand, adj_[pick]);
      cand = tmp;
    }
    best_ = current_;
    current_.clear();
    expand(0);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  void expand(std::size_t depth) {
    if (++nodes_ > budget_) {
      fail(ErrorCode::kBudgetExceeded,
           "independence number search exceeded " + std::to_string(budget_) +
               " nodes");
    }
    NodeSet& cand = levels_[depth];
    std::vector<std::size_t>& order = order_[depth];
    std::vector<std::size_t>& bounds = bounds_[depth];
    colour_sort(cand, order, bounds);

    for (std::size_t k = order.size(); k-- > 0;) {
      if (current_.size() + bounds[k] <= best_.size()) return;
      const std::size_t v = order[k];
      current_.push_back(v);
      NodeSet& next = levels_[depth + 1];
      next.assign_and(cand, adj_[v]);
      if (next.none()) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(depth + 1);
      }
      current_.pop_back();
      cand.reset(v);
    }
  }

  // Greedy sequential colouring; order[k] has colour bounds[k], with bounds
  // non-decreasing along order.
  void colour_sort(const NodeSet& cand, std::vector<std::size_t>& order,
                   std::vector<std::size_t>& bounds) {
    order.clear();
    bounds.clear();
    NodeSet uncoloured = cand;
    NodeSet cls(cand.universe());
    std::size_t colour = 0;
    while (!uncoloured.none()) {
      ++colour;
      cls = uncoloured;
      while (!cls.none()) {
        const std::size_t v = cls.first();
        cls.reset(v);
        uncoloured.reset(v);
        cls.subtract(adj_[v]);
        order.push_back(v);
        bounds.push_back(colour);
      }
    }
  }

  std::vector<NodeSet> adj_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<NodeSet> levels_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::vector<std::size_t>> bounds_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

}  // namespace

std::vector<std::size_t> maximum_independent_set(const BinaryDigraph& g,
                                                 const MisOptions& options) {
  const std::size_t n = g.size();
  require(n >= 1, ErrorCode::kInvalidInput, "graph has no nodes");

  // Relabel by ascending symmetrized degree: low-degree nodes of G are the
  // high-degree nodes of the complement, which the colouring handles first.
  const std::vector<NodeSet> nbr = g.symmetrized();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return nbr[a].count() < nbr[b].count();
  });
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[perm[k]] = k;

  std::vector<NodeSet> complement(n, NodeSet(n));
  for (std::size_t a = 0; a < n; ++a) {
    NodeSet& row = complement[pos[a]];
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !nbr[a].test(b)) row.set(pos[b]);
    }
  }

  std::vector<std::size_t> found =
      CliqueSearch(std::move(complement), options.node_budget).run();
  for (std::size_t& v : found) v = perm[v];
  std::sort(found.begin(), found.end());
  return found;
}

std::size_t independence_number(const BinaryDigraph& g, const MisOptions& options) {
  return maximum_independent_set(g, options).size();
}

}  // namespace sideobs
