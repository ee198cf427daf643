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

#include "sbalab/valuation.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace sbalab {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Components of `within` under the positive edges contained in it.
}  // namespace

std::vector<ItemSet> positive_components(const HypergraphValuation& h,
                                         const ItemSet& within) {
  UnionFind uf(h.m());
  for (const Hyperedge& e : h.edges()) {
    if (e.weight <= 0.0 || !e.members.subset_of(within)) continue;
    const int root = e.members.lowest();
    e.members.for_each([&](int i) { uf.unite(root, i); });
  }
  std::vector<ItemSet> comps;
  std::vector<int> slot(static_cast<std::size_t>(h.m()), -1);
  within.for_each([&](int i) {
    const int r = uf.find(i);
    auto& s = slot[static_cast<std::size_t>(r)];
    if (s < 0) {
      s = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(s)].insert(i);
  });
  return comps;
}

namespace {

void check_items(const Valuation& v, const ItemSet& s) {
  if (s.highest() >= v.m()) {
    throw DomainError("item " + std::to_string(s.highest()) + " outside [0, " +
                      std::to_string(v.m()) + ")");
  }
}

std::vector<LocalEdge> localize_edges(const HypergraphValuation& h,
                                      const std::vector<int>& basis,
                                      const ItemSet& basis_set) {
  std::vector<LocalEdge> out;
  for (const Hyperedge& e : h.edges()) {
    if (e.weight == 0.0 || !e.members.subset_of(basis_set)) continue;
    out.push_back({e.members.compress(basis), e.weight});
  }
  return out;
}

template <typename Kernel>
ItemSet demand_impl(const Valuation& v, const ItemSet& available, Money price,
                    DemandTie tie, Kernel kernel) {
  if (price < 0.0) throw PreconditionError("demand_select: negative price");
  check_items(v, available);
  std::vector<ItemSet> groups;
  if (v.is_hypergraph()) {
    groups = positive_components(v.hypergraph(), available);
  } else {
    groups.push_back(available);
  }
  ItemSet chosen;
  for (const ItemSet& group : groups) {
    const std::vector<int> basis = group.members();
    if (basis.size() > static_cast<std::size_t>(kMaxLocalItems)) {
      throw CapacityError("demand_select: " + std::to_string(basis.size()) +
                          " interdependent goods exceed the exhaustive cap of " +
                          std::to_string(kMaxLocalItems));
    }
    const LocalSetFunction f = v.localize(basis);
    const SubsetChoice c = kernel(f, static_cast<int>(basis.size()), price, tie);
    chosen |= ItemSet::expand(c.mask, basis);
  }
  return chosen;
}

}  // namespace

HypergraphValuation::HypergraphValuation(int m) : m_(m) {
  if (m < 0 || m > kMaxItems) {
    throw DomainError("item count " + std::to_string(m) + " outside [0, " +
                      std::to_string(kMaxItems) + "]");
  }
  for (int i = 0; i < m; ++i) components_.push_back(ItemSet{}.with(i));
}

Money HypergraphValuation::value(const ItemSet& s) const {
  Money total = 0.0;
  for (const Hyperedge& e : edges_) {
    if (e.members.subset_of(s)) total += e.weight;
  }
  return total;
}

HypergraphValuation validate_hypergraph(int m, std::vector<Hyperedge> edges) {
  HypergraphValuation h(m);
  for (const Hyperedge& e : edges) {
    if (e.members.empty()) {
      throw ValidationError(ValidationError::Kind::kEmptyEdge, "EmptyEdge: edge has no members");
    }
    if (e.members.highest() >= m) {
      throw ValidationError(ValidationError::Kind::kItemOutOfRange,
                            "edge " + e.members.to_string() + " mentions an item >= m = " +
                                std::to_string(m));
    }
    if (!(e.weight >= 0.0)) {
      throw ValidationError(ValidationError::Kind::kNegativeWeight,
                            "NegativeWeight: edge " + e.members.to_string() +
                                " has weight " + std::to_string(e.weight));
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Hyperedge& a, const Hyperedge& b) { return a.members < b.members; });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].members == edges[i - 1].members) {
      throw ValidationError(ValidationError::Kind::kDuplicateEdge,
                            "DuplicateEdge: " + edges[i].members.to_string());
    }
  }
  h.edges_ = std::move(edges);
  h.components_ = positive_components(h, h.ground());
  return h;
}

MaxValuation::MaxValuation(std::vector<HypergraphValuation> parts)
    : parts_(std::move(parts)) {
  if (parts_.empty()) throw PreconditionError("MaxValuation needs at least one part");
  for (const auto& p : parts_) {
    if (p.m() != parts_.front().m()) {
      throw PreconditionError("MaxValuation parts disagree on the item count");
    }
  }
}

Money MaxValuation::value(const ItemSet& s) const { return parts_[best_part(s)].value(s); }

std::size_t MaxValuation::best_part(const ItemSet& s) const {
  std::size_t best = 0;
  Money best_value = parts_[0].value(s);
  for (std::size_t i = 1; i < parts_.size(); ++i) {
    const Money v = parts_[i].value(s);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

int Valuation::m() const {
  return std::visit([](const auto& r) { return r.m(); }, rep_);
}

Money Valuation::value(const ItemSet& s) const {
  return std::visit([&](const auto& r) { return r.value(s); }, rep_);
}

const HypergraphValuation& Valuation::hypergraph() const {
  if (!is_hypergraph()) throw PreconditionError("valuation is a max over hypergraphs");
  return std::get<HypergraphValuation>(rep_);
}

const MaxValuation& Valuation::max() const {
  if (is_hypergraph()) throw PreconditionError("valuation is a single hypergraph");
  return std::get<MaxValuation>(rep_);
}

std::vector<const HypergraphValuation*> Valuation::parts() const {
  std::vector<const HypergraphValuation*> out;
  if (is_hypergraph()) {
    out.push_back(&hypergraph());
  } else {
    for (const auto& p : max().parts()) out.push_back(&p);
  }
  return out;
}

LocalSetFunction Valuation::localize(const std::vector<int>& basis) const {
  if (basis.size() > static_cast<std::size_t>(kMaxLocalItems)) {
    throw CapacityError("cannot localize more than " + std::to_string(kMaxLocalItems) +
                        " goods");
  }
  const ItemSet basis_set = ItemSet::of(basis);
  std::vector<std::vector<LocalEdge>> parts;
  for (const HypergraphValuation* h : this->parts()) {
    parts.push_back(localize_edges(*h, basis, basis_set));
  }
  return LocalSetFunction(std::move(parts));
}

Money value(const Valuation& v, const ItemSet& s) {
  check_items(v, s);
  return v.value(s);
}

Money marginal(const Valuation& v, int j, const ItemSet& s) {
  if (j < 0 || j >= v.m()) throw DomainError("marginal: item outside [0, m)");
  check_items(v, s);
  if (s.contains(j)) throw PreconditionError("marginal: item already in the set");
  return v.value(s.with(j)) - v.value(s);
}

ItemSet demand_select(const Valuation& v, const ItemSet& available, Money price,
                      DemandTie tie) {
  return demand_impl(v, available, price, tie,
                     [](const LocalSetFunction& f, int c, Money p, DemandTie t) {
                       return argmax_demand(f, c, p, t);
                     });
}

ItemSet demand_select_serial(const Valuation& v, const ItemSet& available, Money price,
                             DemandTie tie) {
  return demand_impl(v, available, price, tie,
                     [](const LocalSetFunction& f, int c, Money p, DemandTie t) {
                       return argmax_demand_serial(f, c, p, t);
                     });
}

Money demand_utility(const Valuation& v, const ItemSet& available, Money price) {
  const ItemSet s = demand_select(v, available, price);
  return s.empty() ? 0.0 : v.value(s) - static_cast<double>(s.count()) * price;
}

std::vector<Money> demand_envelope(const Valuation& v, const ItemSet& available) {
  check_items(v, available);
  std::vector<ItemSet> groups;
  if (v.is_hypergraph()) {
    groups = positive_components(v.hypergraph(), available);
  } else {
    groups.push_back(available);
  }
  std::vector<Money> env{0.0};
  for (const ItemSet& group : groups) {
    const std::vector<int> basis = group.members();
    const int c = static_cast<int>(basis.size());
    if (c > kMaxLocalItems) {
      throw CapacityError("demand_envelope: " + std::to_string(c) +
                          " interdependent goods exceed the exhaustive cap");
    }
    std::vector<Money> local(static_cast<std::size_t>(c) + 1, 0.0);
    const std::vector<double> table = value_table(v.localize(basis), c);
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
      auto& slot = local[static_cast<std::size_t>(std::popcount(mask))];
      slot = std::max(slot, table[mask]);
    }
    // max-plus convolution with the envelope of the groups so far
    std::vector<Money> merged(env.size() + static_cast<std::size_t>(c), 0.0);
    for (std::size_t a = 0; a < env.size(); ++a) {
      for (std::size_t b = 0; b < local.size(); ++b) {
        merged[a + b] = std::max(merged[a + b], env[a] + local[b]);
      }
    }
    env = std::move(merged);
  }
  return env;
}

StructureReport check_structure(const Valuation& v) {
  if (v.m() > kStructureCap) {
    throw CapacityError("check_structure: m = " + std::to_string(v.m()) +
                        " exceeds the cap of " + std::to_string(kStructureCap));
  }
  const std::vector<int> basis = ItemSet::range(v.m()).members();
  const std::vector<double> table = value_table(v.localize(basis), v.m());
  const StructureScan scan = scan_structure(table, v.m());
  StructureReport report;
  report.monotone = scan.monotone;
  report.subadditive = scan.subadditive;
  if (!scan.subadditive) {
    report.subadditive_a = ItemSet::expand(scan.subadditive_a, basis);
    report.subadditive_b = ItemSet::expand(scan.subadditive_b, basis);
  }
  return report;
}

}  // namespace sbalab
