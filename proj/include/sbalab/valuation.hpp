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

// Set-function valuations in positive-hypergraph form.
//
// A HypergraphValuation stores nonnegative weights on hyperedges and values a
// bundle S at the total weight of the edges contained in S. A MaxValuation is
// the pointwise maximum of several hypergraph valuations over the same goods.
// Both are immutable after construction and safe to share between threads.

#ifndef SBALAB_VALUATION_HPP_
#define SBALAB_VALUATION_HPP_

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "sbalab/errors.hpp"
#include "sbalab/item_set.hpp"
#include "sbalab/subset_kernels.hpp"

namespace sbalab {

struct Hyperedge {
  ItemSet members;
  Money weight = 0.0;

  bool operator==(const Hyperedge&) const = default;
};

class HypergraphValuation {
 public:
  // The zero valuation over m goods.
  explicit HypergraphValuation(int m = 0);

  int m() const { return m_; }
  std::span<const Hyperedge> edges() const { return edges_; }
  ItemSet ground() const { return ItemSet::range(m_); }

  Money value(const ItemSet& s) const;

  // Connected components of the items under edges with positive weight.
  // Items touched by no such edge form singleton components. Components are
  // listed by their smallest item.
  const std::vector<ItemSet>& components() const { return components_; }

 private:
  friend HypergraphValuation validate_hypergraph(int m, std::vector<Hyperedge> edges);

  int m_ = 0;
  std::vector<Hyperedge> edges_;
  std::vector<ItemSet> components_;
};

// Rejects negative weights, duplicate member sets, empty edges and items
// outside [0, m); sorts edges by member set.
HypergraphValuation validate_hypergraph(int m, std::vector<Hyperedge> edges);

class MaxValuation {
 public:
  explicit MaxValuation(std::vector<HypergraphValuation> parts);

  int m() const { return parts_.front().m(); }
  std::span<const HypergraphValuation> parts() const { return parts_; }

  Money value(const ItemSet& s) const;
  // Index of the first part attaining the maximum at s.
  std::size_t best_part(const ItemSet& s) const;

 private:
  std::vector<HypergraphValuation> parts_;
};

class Valuation {
 public:
  Valuation(HypergraphValuation h) : rep_(std::move(h)) {}  // NOLINT
  Valuation(MaxValuation mv) : rep_(std::move(mv)) {}       // NOLINT

  int m() const;
  Money value(const ItemSet& s) const;
  // value of all m goods
  Money grand_value() const { return value(ItemSet::range(m())); }

  bool is_hypergraph() const { return std::holds_alternative<HypergraphValuation>(rep_); }
  const HypergraphValuation& hypergraph() const;
  const MaxValuation& max() const;
  // Every hypergraph that makes up this valuation (one for a plain hypergraph).
  std::vector<const HypergraphValuation*> parts() const;

  // Restriction to the goods listed in `basis` (at most kMaxLocalItems),
  // renumbered 0..basis.size()-1. Edges not inside basis are dropped.
  LocalSetFunction localize(const std::vector<int>& basis) const;

 private:
  std::variant<HypergraphValuation, MaxValuation> rep_;
};

// value(s), rejecting items >= m.
Money value(const Valuation& v, const ItemSet& s);

// value(s + j) - value(s); requires j not in s.
Money marginal(const Valuation& v, int j, const ItemSet& s);

// A utility-maximizing bundle S of `available` at per-item price `price`:
// argmax v(S) - |S| * price, ties broken by `tie`.
//
// Hypergraph valuations decompose over their connected components, so each
// component is searched on its own; a component (or, for a MaxValuation, the
// whole available set) may hold at most kMaxLocalItems goods.
ItemSet demand_select(const Valuation& v, const ItemSet& available, Money price,
                      DemandTie tie = DemandTie::kFewestItems);
// Same contract, single-threaded kernels throughout.
ItemSet demand_select_serial(const Valuation& v, const ItemSet& available, Money price,
                             DemandTie tie = DemandTie::kFewestItems);

// max over S subset of available of v(S) - |S| * price.
Money demand_utility(const Valuation& v, const ItemSet& available, Money price);

// env[c] = max value of a c-item subset of `available`, c = 0..|available|.
// The demand utility at any price is max_c env[c] - c * price.
std::vector<Money> demand_envelope(const Valuation& v, const ItemSet& available);

// Connected components of `within` under the positive edges of h that lie
// inside `within`, listed by smallest item.
std::vector<ItemSet> positive_components(const HypergraphValuation& h, const ItemSet& within);

struct StructureReport {
  bool monotone = true;
  bool subadditive = true;
  // counterexample for subadditivity: v(a | b) > v(a) + v(b)
  ItemSet subadditive_a;
  ItemSet subadditive_b;
};

inline constexpr int kStructureCap = 16;

// Exhaustive monotonicity and subadditivity check; m <= kStructureCap.
StructureReport check_structure(const Valuation& v);

}  // namespace sbalab

#endif  // SBALAB_VALUATION_HPP_
