// Copyright 2026 The sbalab Authors.
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

// Exact welfare maximization by dynamic programming over item subsets.

#ifndef SBALAB_OPTIMIZER_HPP_
#define SBALAB_OPTIMIZER_HPP_

#include <span>
#include <vector>

#include "sbalab/item_set.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

// Per-agent bundles, pairwise disjoint; items may stay unassigned.
using Allocation = std::vector<ItemSet>;

inline constexpr int kOptimizerCap = 16;

struct OptimalAllocation {
  Allocation alloc;
  Money welfare = 0.0;
};

// next[S] = max_T prev[S \ T] + v_i(T), agent by agent; O(n 3^m), m <=
// kOptimizerCap. Among exact ties each layer keeps the smallest bundle, so
// later agents are served first when backtracking.
OptimalAllocation optimal_allocation(std::span<const Valuation> vals);
OptimalAllocation optimal_allocation_serial(std::span<const Valuation> vals);

// Sum of v_i(alloc_i). Throws DomainError on overlapping bundles.
Money social_welfare(std::span<const Valuation> vals, const Allocation& alloc);

struct LopsidedReport {
  bool lopsided = false;
  Money opt = 0.0;
  // largest welfare from bundles of >= z items over all optimal allocations
  Money large_welfare = 0.0;
  Allocation witness;
  std::vector<int> large_agents;
};

// Whether some optimal allocation earns at least half its welfare from
// agents holding >= z items. Every optimal allocation restricted to the
// first i agents is optimal for the items they hold, so a second DP over
// prefix-optimal transitions maximizes the large-bundle welfare exactly.
LopsidedReport lopsided_check(std::span<const Valuation> vals, int z);

}  // namespace sbalab

#endif  // SBALAB_OPTIMIZER_HPP_
