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

// Complement structure of valuations: supermodular dependency sets, hyperedge
// rank, and recognition of the "common value over disjoint blocks" class.

#ifndef SBALAB_HIERARCHY_HPP_
#define SBALAB_HIERARCHY_HPP_

#include <optional>
#include <vector>

#include "sbalab/item_set.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

enum class DepMethod {
  // Exhaustive scan for a set S on which j' raises the marginal of j.
  // Works for any valuation with m <= kStructureCap.
  kBruteForce,
  // Neighbours of j in the positive hypergraph. Single hypergraphs only.
  kEdgeRule,
};

// Items j' != j whose presence strictly raises the marginal value of j for
// some bundle.
ItemSet dep_plus(const Valuation& v, int j, DepMethod method);

// max_j |dep_plus(v, j)|. Uses kEdgeRule for hypergraphs and kBruteForce for
// max valuations.
int supermodular_degree(const Valuation& v);
int supermodular_degree(const Valuation& v, DepMethod method);

// Size of the largest positive-weight hyperedge; 0 for the zero valuation.
int ph_rank(const HypergraphValuation& h);

// Signed hypergraph representation of any valuation with m <= kStructureCap,
// via Moebius inversion of its value table. Zero weights are omitted.
std::vector<Hyperedge> mobius_edges(const Valuation& v);

// A valuation that is additive over disjoint blocks of size <= d, each
// block Q worth unit_value * |Q| and every other bundle worth the sum of the
// blocks it contains.
struct BlockWitness {
  Money unit_value = 0.0;
  std::vector<ItemSet> blocks;
};

// Recognition goes through the unique hypergraph representation: the
// valuation qualifies iff its nonzero edges are pairwise disjoint, each has
// at most d members and all share weight / size. The zero valuation
// qualifies with no blocks.
std::optional<BlockWitness> is_d_ch(const HypergraphValuation& h, int d);
// Max valuations are first inverted (m <= kStructureCap).
std::optional<BlockWitness> is_d_ch(const Valuation& v, int d);

// Builds the valuation described by a witness.
HypergraphValuation from_witness(int m, const BlockWitness& w);

// Harmonic number with the fractional convention: H_x for integer x and
// H_floor(x) + 1 otherwise; H_0 = 0.
double harmonic(double x);

struct ClassLabel {
  int m = 0;
  int parts = 1;
  // max over parts
  int ph_rank = 0;
  int sm_degree = 0;
  // per-part supermodular degree (one entry for a plain hypergraph)
  std::vector<int> part_sm_degrees;
  // smallest d with is_d_ch, or -1 if none up to m
  int min_ch_block = -1;
};

// Positive-hypergraph class membership of an explicit valuation. Max
// valuations are classified part by part.
ClassLabel classify(const Valuation& v);

// v is PH with every part of supermodular degree <= d.
bool in_ps_d(const Valuation& v, int d);

}  // namespace sbalab

#endif  // SBALAB_HIERARCHY_HPP_
