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

#include "sbalab/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace sbalab {

namespace {

std::vector<double> full_table(const Valuation& v, const char* who) {
  if (v.m() > kStructureCap) {
    throw CapacityError(std::string(who) + ": m = " + std::to_string(v.m()) +
                        " exceeds the exhaustive cap of " + std::to_string(kStructureCap));
  }
  return value_table(v.localize(ItemSet::range(v.m()).members()), v.m());
}

ItemSet dep_plus_brute(const std::vector<double>& table, int m, int j) {
  const std::uint32_t jb = std::uint32_t{1} << j;
  ItemSet out;
  for (int k = 0; k < m; ++k) {
    if (k == j) continue;
    const std::uint32_t kb = std::uint32_t{1} << k;
    const std::uint32_t rest = ((std::uint32_t{1} << m) - 1) & ~jb & ~kb;
    // iterate every S inside rest
    std::uint32_t s = 0;
    do {
      const double with_k = table[s | jb | kb] - table[s | kb];
      const double without_k = table[s | jb] - table[s];
      if (with_k > without_k + kMoneyTol) {
        out.insert(k);
        break;
      }
      s = (s - rest) & rest;
    } while (s != 0);
  }
  return out;
}

std::optional<BlockWitness> block_structure(std::span<const Hyperedge> edges, int d) {
  BlockWitness w;
  ItemSet used;
  bool have_unit = false;
  for (const Hyperedge& e : edges) {
    if (std::abs(e.weight) <= kMoneyTol) continue;
    if (e.weight < 0.0 || e.members.count() > d || e.members.intersects(used)) {
      return std::nullopt;
    }
    const double unit = e.weight / e.members.count();
    if (!have_unit) {
      w.unit_value = unit;
      have_unit = true;
    } else if (std::abs(unit - w.unit_value) > kMoneyTol * std::max(1.0, w.unit_value)) {
      return std::nullopt;
    }
    used |= e.members;
    w.blocks.push_back(e.members);
  }
  return w;
}

}  // namespace

ItemSet dep_plus(const Valuation& v, int j, DepMethod method) {
  if (j < 0 || j >= v.m()) throw DomainError("dep_plus: item outside [0, m)");
  if (method == DepMethod::kEdgeRule) {
    if (!v.is_hypergraph()) {
      throw PreconditionError("dep_plus: the edge rule needs a single hypergraph");
    }
    ItemSet out;
    for (const Hyperedge& e : v.hypergraph().edges()) {
      if (e.weight > 0.0 && e.members.contains(j)) out |= e.members;
    }
    return out.empty() ? out : out.without(j);
  }
  const std::vector<double> table = full_table(v, "dep_plus");
  return dep_plus_brute(table, v.m(), j);
}

int supermodular_degree(const Valuation& v) {
  return supermodular_degree(v, v.is_hypergraph() ? DepMethod::kEdgeRule
                                                  : DepMethod::kBruteForce);
}

int supermodular_degree(const Valuation& v, DepMethod method) {
  int best = 0;
  if (method == DepMethod::kBruteForce) {
    const std::vector<double> table = full_table(v, "supermodular_degree");
    for (int j = 0; j < v.m(); ++j) {
      best = std::max(best, dep_plus_brute(table, v.m(), j).count());
    }
    return best;
  }
  for (int j = 0; j < v.m(); ++j) best = std::max(best, dep_plus(v, j, method).count());
  return best;
}

int ph_rank(const HypergraphValuation& h) {
  int rank = 0;
  for (const Hyperedge& e : h.edges()) {
    if (e.weight > 0.0) rank = std::max(rank, e.members.count());
  }
  return rank;
}

std::vector<Hyperedge> mobius_edges(const Valuation& v) {
  const int m = v.m();
  std::vector<double> coef = full_table(v, "mobius_edges");
  // in-place inverse zeta transform over subsets
  for (int i = 0; i < m; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t s = 0; s < coef.size(); ++s) {
      if (s & bit) coef[s] -= coef[s ^ bit];
    }
  }
  std::vector<Hyperedge> edges;
  const std::vector<int> basis = ItemSet::range(m).members();
  for (std::uint32_t s = 1; s < coef.size(); ++s) {
    if (std::abs(coef[s]) > kMoneyTol) edges.push_back({ItemSet::expand(s, basis), coef[s]});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Hyperedge& a, const Hyperedge& b) { return a.members < b.members; });
  return edges;
}

std::optional<BlockWitness> is_d_ch(const HypergraphValuation& h, int d) {
  if (d < 1) throw DomainError("is_d_ch: block size bound must be >= 1");
  return block_structure(h.edges(), d);
}

std::optional<BlockWitness> is_d_ch(const Valuation& v, int d) {
  if (v.is_hypergraph()) return is_d_ch(v.hypergraph(), d);
  if (d < 1) throw DomainError("is_d_ch: block size bound must be >= 1");
  const std::vector<Hyperedge> edges = mobius_edges(v);
  return block_structure(edges, d);
}

HypergraphValuation from_witness(int m, const BlockWitness& w) {
  std::vector<Hyperedge> edges;
  for (const ItemSet& q : w.blocks) {
    edges.push_back({q, w.unit_value * q.count()});
  }
  return validate_hypergraph(m, std::move(edges));
}

double harmonic(double x) {
  if (!(x >= 0.0)) throw DomainError("harmonic: negative argument");
  const double whole = std::floor(x);
  double h = 0.0;
  for (long k = 1; k <= static_cast<long>(whole); ++k) h += 1.0 / static_cast<double>(k);
  return whole == x ? h : h + 1.0;
}

ClassLabel classify(const Valuation& v) {
  ClassLabel label;
  label.m = v.m();
  const auto parts = v.parts();
  label.parts = static_cast<int>(parts.size());
  for (const HypergraphValuation* h : parts) {
    label.ph_rank = std::max(label.ph_rank, ph_rank(*h));
    const int sd = supermodular_degree(Valuation(*h), DepMethod::kEdgeRule);
    label.part_sm_degrees.push_back(sd);
  }
  if (v.is_hypergraph()) {
    label.sm_degree = label.part_sm_degrees.front();
  } else if (v.m() <= kStructureCap) {
    label.sm_degree = supermodular_degree(v, DepMethod::kBruteForce);
  } else {
    label.sm_degree = -1;
  }
  if (v.is_hypergraph() || v.m() <= kStructureCap) {
    for (int d = 1; d <= std::max(1, v.m()); ++d) {
      if (is_d_ch(v, d)) {
        label.min_ch_block = d;
        break;
      }
    }
  }
  return label;
}

bool in_ps_d(const Valuation& v, int d) {
  for (const HypergraphValuation* h : v.parts()) {
    if (supermodular_degree(Valuation(*h), DepMethod::kEdgeRule) > d) return false;
  }
  return true;
}

}  // namespace sbalab
