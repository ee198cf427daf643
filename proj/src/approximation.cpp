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

#include "sbalab/approximation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sbalab {

namespace {

std::uint32_t bit(int i) { return std::uint32_t{1} << i; }

Valuation relevant_part(const Valuation& v, const ItemSet& x) {
  if (v.is_hypergraph()) return v;
  const MaxValuation& mv = v.max();
  return mv.parts()[mv.best_part(x)];
}

ApproxCertificate zero_certificate(const Valuation& v, const ItemSet& x,
                                   const Partition& partition, double beta) {
  ApproxCertificate cert;
  cert.approximator = HypergraphValuation(v.m());
  cert.beta = beta;
  cert.x = x;
  cert.partition = partition;
  return cert;
}

}  // namespace

void check_partition(const Partition& p) {
  ItemSet seen;
  for (const ItemSet& q : p.blocks) {
    if (q.empty()) throw PreconditionError("partition has an empty block");
    if (q.intersects(seen)) throw PreconditionError("partition blocks overlap");
    seen |= q;
  }
  if (seen != p.ground) throw PreconditionError("partition blocks do not cover the ground set");
}

Partition greedy_partition(const Valuation& v, const ItemSet& x, int d) {
  if (d < 0) throw DomainError("greedy_partition: d must be >= 0");
  if (x.count() > kMaxLocalItems) {
    throw CapacityError("greedy_partition: |X| = " + std::to_string(x.count()) +
                        " exceeds " + std::to_string(kMaxLocalItems));
  }
  if (x.highest() >= v.m()) throw DomainError("greedy_partition: X mentions items >= m");
  Partition p{x, {}};
  ItemSet rest = x;
  while (!rest.empty()) {
    if (rest.count() <= d + 1) {
      // fewer than d+1 left (or exactly d+1: the only candidate)
      p.blocks.push_back(rest);
      break;
    }
    const std::vector<int> basis = rest.members();
    const SubsetChoice c =
        argmax_fixed_size(v.localize(basis), static_cast<int>(basis.size()), d + 1);
    const ItemSet q = ItemSet::expand(c.mask, basis);
    p.blocks.push_back(q);
    rest -= q;
  }
  return p;
}

HypergraphValuation build_hq(const Valuation& v, const ItemSet& x,
                             const Partition& partition, double beta,
                             const ItemSet& support) {
  if (!(beta > 0.0)) throw DomainError("build_hq: beta must be positive");
  const Money vx = value(v, x);
  if (!(vx > 0.0)) throw PreconditionError("build_hq: v(X) must be positive");
  ItemSet covered;
  std::vector<Hyperedge> edges;
  const double unit = vx / (static_cast<double>(support.count()) * beta);
  for (const ItemSet& q : partition.blocks) {
    if (!q.subset_of(support)) {
      if (q.intersects(support)) {
        throw PreconditionError("build_hq: support cuts through block " + q.to_string());
      }
      continue;
    }
    covered |= q;
    edges.push_back({q, unit * q.count()});
  }
  if (covered != support) throw PreconditionError("build_hq: support is not a union of blocks");
  return validate_hypergraph(v.m(), std::move(edges));
}

ApproxResult refine_blocks(const Valuation& v, const ItemSet& x, const Partition& partition,
                           double beta) {
  if (!(beta > 0.0)) throw DomainError("refine_blocks: beta must be positive");
  check_partition(partition);
  if (partition.ground != x) throw PreconditionError("refine_blocks: partition is not of X");
  const Money vx = value(v, x);
  if (!(vx > 0.0)) return zero_certificate(v, x, partition, beta);

  std::uint64_t checked = 0;
  ApproxFailure trace;
  trace.partition = partition;
  ItemSet support = x;
  while (true) {
    std::vector<ItemSet> live;
    for (const ItemSet& q : partition.blocks) {
      if (q.subset_of(support)) live.push_back(q);
    }
    const int nb = static_cast<int>(live.size());
    if (nb > kMaxLocalItems) {
      throw CapacityError("refine_blocks: more than " + std::to_string(kMaxLocalItems) +
                          " blocks");
    }
    const double unit = vx / (static_cast<double>(support.count()) * beta);
    // Both sides as functions of which live blocks a union contains.
    std::vector<LocalEdge> upper_edges;
    for (int i = 0; i < nb; ++i) upper_edges.push_back({bit(i), unit * live[i].count()});
    std::vector<std::vector<LocalEdge>> lower_parts;
    for (const HypergraphValuation* h : v.parts()) {
      std::vector<LocalEdge> part;
      for (const Hyperedge& e : h->edges()) {
        if (e.weight == 0.0 || !e.members.subset_of(support)) continue;
        std::uint32_t touched = 0;
        for (int i = 0; i < nb; ++i) {
          if (e.members.intersects(live[i])) touched |= bit(i);
        }
        part.push_back({touched, e.weight});
      }
      lower_parts.push_back(std::move(part));
    }
    const LocalSetFunction upper({upper_edges});
    const LocalSetFunction lower(std::move(lower_parts));
    const SubsetChoice worst = max_excess(upper, lower, nb);
    checked += std::uint64_t{1} << nb;

    if (worst.score > kMoneyTol) {
      ItemSet t;
      for (int i = 0; i < nb; ++i) {
        if (worst.mask & bit(i)) t |= live[i];
      }
      trace.supports.push_back(support);
      trace.removed.push_back(t);
      trace.shrink_ratio += static_cast<double>(t.count()) / support.count();
      support -= t;
      if (support.empty()) return trace;
      continue;
    }

    ApproxCertificate cert;
    cert.approximator = build_hq(v, x, partition, beta, support);
    cert.blocks.unit_value = unit;
    cert.blocks.blocks = live;
    cert.beta = beta;
    cert.x = x;
    cert.support = support;
    cert.partition = partition;
    if (v.m() <= kFullRecheckCap) {
      const std::vector<int> all = ItemSet::range(v.m()).members();
      const SubsetChoice full =
          max_excess(Valuation(cert.approximator).localize(all), v.localize(all), v.m());
      checked += std::uint64_t{1} << v.m();
      if (full.score > kMoneyTol) {
        // Unreachable for monotone v: the worst bundle's block union is at
        // least as bad and was already ruled out above.
        throw std::logic_error("refine_blocks: bundle " +
                               ItemSet::expand(full.mask, all).to_string() +
                               " violates a certificate that passed the block-union scan");
      }
      cert.exhaustive = true;
    }
    cert.checked_sets = checked;
    return cert;
  }
}

ApproxResult pointwise_approx(const Valuation& v, const ItemSet& x, int d, double beta) {
  const Valuation part = relevant_part(v, x);
  if (!(value(part, x) > 0.0)) {
    return zero_certificate(v, x, Partition{x, x.empty() ? std::vector<ItemSet>{}
                                                         : std::vector<ItemSet>{x}},
                            beta);
  }
  const Partition p = greedy_partition(part, x, d);
  return refine_blocks(part, x, p, beta);
}

CrossingWeight crossing_weight(const HypergraphValuation& h, const Partition& partition) {
  CrossingWeight out;
  for (const Hyperedge& e : h.edges()) {
    if (e.weight <= 0.0 || !e.members.subset_of(partition.ground)) continue;
    const bool inside = std::any_of(partition.blocks.begin(), partition.blocks.end(),
                                    [&](const ItemSet& q) { return e.members.subset_of(q); });
    (inside ? out.interior : out.crossing) += e.weight;
  }
  return out;
}

PairingResult ph2_pairing(const HypergraphValuation& h, const ItemSet& x, double beta) {
  if (ph_rank(h) > 2) throw PreconditionError("ph2_pairing: valuation has edges of size > 2");
  PairingResult out;
  std::vector<Money> weights;
  for (const Hyperedge& e : h.edges()) {
    if (e.weight <= 0.0 || e.members.count() != 2 || !e.members.subset_of(x)) continue;
    out.coloring.edges.emplace_back(e.members.lowest(), e.members.highest());
    weights.push_back(e.weight);
  }
  std::vector<std::pair<int, int>> edges = out.coloring.edges;
  out.coloring = vizing_color(edges);
  out.class_weight.assign(static_cast<std::size_t>(out.coloring.num_colors), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out.class_weight[static_cast<std::size_t>(out.coloring.color[i])] += weights[i];
    out.total_edge_weight += weights[i];
  }
  for (int c = 0; c < out.coloring.num_colors; ++c) {
    if (out.heaviest < 0 || out.class_weight[static_cast<std::size_t>(c)] >
                                out.class_weight[static_cast<std::size_t>(out.heaviest)]) {
      out.heaviest = c;
    }
  }
  out.partition.ground = x;
  ItemSet matched;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (out.coloring.color[i] != out.heaviest) continue;
    const ItemSet pair{edges[i].first, edges[i].second};
    out.partition.blocks.push_back(pair);
    matched |= pair;
  }
  const std::vector<int> rest = (x - matched).members();
  for (std::size_t i = 0; i < rest.size(); i += 2) {
    ItemSet q{rest[i]};
    if (i + 1 < rest.size()) q.insert(rest[i + 1]);
    out.partition.blocks.push_back(q);
  }
  std::sort(out.partition.blocks.begin(), out.partition.blocks.end());
  out.result = refine_blocks(h, x, out.partition, beta);
  return out;
}

BestBlockApprox best_kch_search(const Valuation& v, const ItemSet& x, int k) {
  if (k < 1) throw DomainError("best_kch_search: k must be >= 1");
  if (x.count() > kBestBlockCap) {
    throw CapacityError("best_kch_search: |X| = " + std::to_string(x.count()) +
                        " exceeds " + std::to_string(kBestBlockCap));
  }
  BestBlockApprox out;
  const Money vx = value(v, x);
  if (!(vx > 0.0)) {
    out.beta_star = 1.0;
    return out;
  }
  const std::vector<int> basis = x.members();
  const int c = static_cast<int>(basis.size());
  const std::vector<double> table = value_table(v.localize(basis), c);
  const std::uint32_t full = bit(c) - 1;

  double best = 0.0;
  std::vector<std::uint32_t> best_family;
  std::vector<std::uint32_t> family;
  std::vector<std::uint32_t> unions;  // every nonempty subfamily union

  // Families are built by adding blocks in order of their lowest item, so
  // each family is scored exactly once, when its last block is added.
  auto search = [&](auto&& self, int pos, std::uint32_t used, double cur_min) -> void {
    for (int i = pos; i < c; ++i) {
      if (used & bit(i)) continue;
      const std::uint32_t later = full & ~used & ~(bit(i + 1) - 1);
      std::uint32_t extra = 0;
      do {
        if (std::popcount(extra) <= k - 1) {
          const std::uint32_t block = bit(i) | extra;
          const std::size_t old = unions.size();
          double next_min = std::min(cur_min, table[block] / std::popcount(block));
          unions.push_back(block);
          for (std::size_t u = 0; u < old; ++u) {
            const std::uint32_t w = unions[u] | block;
            next_min = std::min(next_min, table[w] / std::popcount(w));
            unions.push_back(w);
          }
          family.push_back(block);
          const std::uint32_t covered = used | block;
          const double score = next_min * std::popcount(covered);
          if (score > best) {
            best = score;
            best_family = family;
          }
          const int free_items = std::popcount(full & ~covered & ~(bit(i + 1) - 1));
          if (next_min * (std::popcount(covered) + free_items) > best) {
            self(self, i + 1, covered, next_min);
          }
          family.pop_back();
          unions.resize(old);
        }
        extra = (extra - later) & later;
      } while (extra != 0);
    }
  };
  search(search, 0, 0, std::numeric_limits<double>::infinity());

  if (best <= 0.0) {
    out.beta_star = std::numeric_limits<double>::infinity();
    return out;
  }
  out.beta_star = vx / best;
  std::uint32_t covered = 0;
  for (std::uint32_t b : best_family) {
    out.witness.blocks.push_back(ItemSet::expand(b, basis));
    covered |= b;
  }
  out.witness.unit_value = best / std::popcount(covered);
  return out;
}

}  // namespace sbalab
