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

// Named lower-bound instances with closed-form metadata, and seeded random
// valuation generators.
//
// Star centers are always the lowest item of their star. Every closed-form
// expectation in InstanceMeta is computed from the construction's formulas,
// never by running the optimizer or a mechanism, except the strong bidder's
// bid in the layered instance (see below).

#ifndef SBALAB_INSTANCES_HPP_
#define SBALAB_INSTANCES_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sbalab/mechanisms.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

struct ShippedProfile {
  Branch branch = Branch::kSingleBid;
  std::vector<Money> bids;
};

struct InstanceMeta {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  Money expected_opt = 0.0;
  Money expected_eq_sw = 0.0;
  double expected_ratio = 0.0;
  TieRule tie;
  // bids that grids must contain for the intended equilibria to exist
  std::vector<Money> critical_bids;
  // equilibrium bid profiles from the construction
  std::vector<ShippedProfile> profiles;
  // expected partition, for single-valuation partition instances
  std::vector<ItemSet> expected_blocks;

  double param(const std::string& key) const;
};

struct InstanceBundle {
  std::vector<Valuation> vals;
  InstanceMeta meta;
};

inline constexpr double kDefaultEps = 1e-3;

// A star on all m items (center 0, edge weights 1) against a bidder who only
// wants item 0, at (m-1)/m + eps. Any equilibrium gives item 0 to the second
// bidder.
InstanceBundle star_instance(int m, double eps = kDefaultEps);

// The star instance on d+1 items, padded with m-d-1 items nobody values.
InstanceBundle sm_star_instance(int d, int m, double eps = kDefaultEps);

// k layers of items with |B_t| = k^t, cut into d-stars; a strong bidder
// values every star, and pairs of additive bidders contest the star centers.
// Layers t = 1..k-1 carry bidders. With include_b0 the single item of B_0
// is kept as an item nobody values, so m = sum_{t<k} k^t.
//
// The share d/(d+k) of stars per layer given to the high center bidders is
// rounded half up. The strong bidder's shipped bid is a best response on its
// default grid against the other shipped bids.
InstanceBundle pos_layered_instance(int k, int d, double eps = kDefaultEps,
                                    bool include_b0 = true);

// m = k^2 in k blocks; star bidder t owns a star on block t, center bidder t
// wants only that star's center at (k-1)/k + eps. Ships one single-bid and
// one grand-bundle equilibrium; the tie order lists every center bidder
// before every star bidder.
InstanceBundle hybrid_lb_instance(int k, double eps = kDefaultEps);

// T bundles of d^2+1 items. Item (t, j), t = 1..T, j = 0..d^2, has index
// (t-1)(d^2+1) + j. Center edges {(t,d^2), (t,kd)} weigh 1/t and rim edges
// {(t,kd), (t,kd+j)} weigh 1/t - eps, k < d, 1 <= j < d. expected_blocks are
// the first T greedy blocks {(t,kd) : k = 0..d}; greedy blocks after them hold
// no edge and are worth 0.
InstanceBundle tight_partition_instance(int d, int T, double eps = 1e-6);

// m = d+1 items with every k-subset an edge of weight 1.
InstanceBundle complete_hypergraph_instance(int d, int k);

// -- random generators ----------------------------------------------------

struct GraphPropertyReport {
  int d = 0;
  int edges = 0;
  int max_degree = 0;
  // every sampled k-set, k <= d+1, spans at most 12 k ln d edges; sizes where
  // C(k,2) is already below the cap hold for every set and are not sampled
  bool sparse_sets = true;
  bool degree_bounded = true;    // max degree <= d
  bool enough_edges = true;      // |E| >= d^3 / 9
  int sampled_sets = 0;
  int worst_set_edges = 0;       // densest sampled set
  bool all() const { return sparse_sets && degree_bounded && enough_edges; }
};

struct RandomGraph {
  HypergraphValuation valuation;
  GraphPropertyReport report;
};

// G(m, p) with unit edge weights. The report uses d = round(sqrt m).
RandomGraph random_graph_valuation(int m, double p, std::uint64_t seed,
                                   int samples_per_size = 2000);

// Up to edge_budget random edges with weights in (0, 1]; an edge is skipped
// if it would give some item more than d neighbours. Result is PS-d.
HypergraphValuation random_ps_d(int m, int d, int edge_budget, std::uint64_t seed,
                                int max_edge_size = -1);

// Graph (edge size <= 2) PS-d valuation with positive item weights.
HypergraphValuation random_ph2_sm_d(int m, int d, int edge_budget, std::uint64_t seed);

// Maximum over `parts` random PS-d valuations.
Valuation random_mps_d(int m, int d, int parts, int edge_budget, std::uint64_t seed);

// Disjoint random blocks of size <= d over a random subset of the items, one
// common per-item value.
HypergraphValuation random_block_uniform(int m, int d, std::uint64_t seed);

// Maximum over a few positive hypergraphs with arbitrary edge sizes.
Valuation random_general(int m, std::uint64_t seed);

}  // namespace sbalab

#endif  // SBALAB_INSTANCES_HPP_
