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

// Pointwise approximation of complement-limited valuations by block-uniform
// ("common value over disjoint blocks") valuations.
//
// The pipeline is: partition the target set into blocks (greedily, or by a
// matching taken from an edge colouring), then shrink the support one
// violating block union at a time until the uniform valuation on the
// remaining blocks lies below v everywhere.

#ifndef SBALAB_APPROXIMATION_HPP_
#define SBALAB_APPROXIMATION_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sbalab/hierarchy.hpp"
#include "sbalab/item_set.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

struct Partition {
  ItemSet ground;
  std::vector<ItemSet> blocks;  // pairwise disjoint, nonempty, union = ground
};

// Throws PreconditionError unless the blocks form a partition of ground.
void check_partition(const Partition& p);

// Repeatedly takes a most valuable subset of exactly d+1 remaining items of X
// (ties to the smallest set), or all remaining items once fewer than d+1 are
// left. |X| <= kMaxLocalItems.
Partition greedy_partition(const Valuation& v, const ItemSet& x, int d);

// The uniform valuation on the blocks of `partition` inside `support`, with
// per-item value v(X) / (|support| * beta). `support` must be a union of
// blocks.
HypergraphValuation build_hq(const Valuation& v, const ItemSet& x,
                             const Partition& partition, double beta,
                             const ItemSet& support);

struct ApproxCertificate {
  HypergraphValuation approximator;
  BlockWitness blocks;
  double beta = 0.0;
  ItemSet x;
  ItemSet support;
  Partition partition;
  // number of bundles T on which approximator(T) <= v(T) was verified
  std::uint64_t checked_sets = 0;
  // true when the check covered every bundle of the m goods
  bool exhaustive = false;
};

// The support shrinking ran out of blocks. Every block lies inside exactly
// one removed set.
struct ApproxFailure {
  Partition partition;
  std::vector<ItemSet> supports;  // S_1 = X, S_2, ...
  std::vector<ItemSet> removed;   // T_1, T_2, ...
  // sum over steps of |removed| / |support|
  double shrink_ratio = 0.0;
};

using ApproxResult = std::variant<ApproxCertificate, ApproxFailure>;

inline constexpr int kFullRecheckCap = 14;

// Shrinks the support of a block-uniform approximator starting from all of
// X. At each step the block union T maximizing approximator(T) - v(T) is
// removed while that excess exceeds kMoneyTol. The final certificate is
// rechecked against every bundle when m <= kFullRecheckCap.
ApproxResult refine_blocks(const Valuation& v, const ItemSet& x, const Partition& partition,
                           double beta);

// Greedy partition followed by refine_blocks. A max valuation is replaced by
// its part attaining v(X). v(X) = 0 yields the zero approximator.
ApproxResult pointwise_approx(const Valuation& v, const ItemSet& x, int d, double beta);

// Sum of positive edges inside the partition's ground that no block
// contains, and sum of block values. interior + crossing = v(ground).
struct CrossingWeight {
  Money crossing = 0.0;
  Money interior = 0.0;
};
CrossingWeight crossing_weight(const HypergraphValuation& h, const Partition& partition);

struct EdgeColoring {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> color;  // per edge, in 0..num_colors-1
  int num_colors = 0;
  int max_degree = 0;
};

// Proper edge colouring with at most max_degree + 1 colours (Misra-Gries fan
// rotation). Throws DomainError on self loops or repeated edges.
EdgeColoring vizing_color(const std::vector<std::pair<int, int>>& edges);

// True when no two edges of one colour share an endpoint.
bool is_proper(const EdgeColoring& c);

struct PairingResult {
  EdgeColoring coloring;
  std::vector<Money> class_weight;  // per colour
  int heaviest = -1;
  Money total_edge_weight = 0.0;
  Partition partition;
  ApproxResult result;
};

// Rank <= 2 valuations: colour the positive pair edges inside X, keep the
// heaviest colour class as blocks, pair the remaining items of X in
// increasing order, then refine_blocks.
PairingResult ph2_pairing(const HypergraphValuation& h, const ItemSet& x, double beta);

struct BestBlockApprox {
  // smallest beta over all k-block-uniform v' <= v with beta v'(X) >= v(X)
  double beta_star = 0.0;
  BlockWitness witness;
};

inline constexpr int kBestBlockCap = 10;

// Exhaustive search over families of disjoint blocks of size <= k inside X.
// For a fixed family the largest admissible per-item value is the minimum
// over nonempty subfamilies G of v(union G) / |union G|.
BestBlockApprox best_kch_search(const Valuation& v, const ItemSet& x, int k);

}  // namespace sbalab

#endif  // SBALAB_APPROXIMATION_HPP_
