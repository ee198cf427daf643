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

#include "sbalab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "sbalab/learning.hpp"

namespace sbalab {

double InstanceMeta::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw PreconditionError("instance " + name + " has no parameter " + key);
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

void require_eps(double eps) {
  require(eps > 0.0 && std::isfinite(eps), "eps must be positive: equilibria rely on strict bids");
}

std::vector<Hyperedge> star_edges(int center, std::span<const int> leaves, Money weight) {
  std::vector<Hyperedge> edges;
  for (int leaf : leaves) edges.push_back({ItemSet{center, leaf}, weight});
  return edges;
}

// One bidder wanting `items` at `price` each, additively.
HypergraphValuation additive(int m, std::span<const int> items, Money price) {
  std::vector<Hyperedge> edges;
  for (int j : items) edges.push_back({ItemSet{j}, price});
  return validate_hypergraph(m, std::move(edges));
}

// The star bidder plus a single-item bidder on item 0.
InstanceBundle star_pair(const std::string& name, int star_items, int m, double eps) {
  std::vector<int> leaves(static_cast<std::size_t>(star_items - 1));
  std::iota(leaves.begin(), leaves.end(), 1);
  const double t = static_cast<double>(star_items - 1) / star_items;
  const int center[] = {0};
  InstanceBundle b;
  b.vals.emplace_back(validate_hypergraph(m, star_edges(0, leaves, 1.0)));
  b.vals.emplace_back(additive(m, center, t + eps));
  b.meta.name = name;
  b.meta.expected_opt = star_items - 1;
  b.meta.expected_eq_sw = t + eps;
  b.meta.expected_ratio = b.meta.expected_opt / b.meta.expected_eq_sw;
  b.meta.critical_bids = {t - eps, t, t + 0.5 * eps, t + eps, t + 2.0 * eps};
  b.meta.profiles.push_back({Branch::kSingleBid, {0.0, t + 0.5 * eps}});
  return b;
}

}  // namespace

InstanceBundle star_instance(int m, double eps) {
  require(m >= 2, "star_instance: m must be at least 2");
  require(m <= kMaxItems, "star_instance: m exceeds the item capacity");
  require_eps(eps);
  InstanceBundle b = star_pair("star", m, m, eps);
  b.meta.params = {{"m", m}, {"eps", eps}};
  return b;
}

InstanceBundle sm_star_instance(int d, int m, double eps) {
  require(d >= 1, "sm_star_instance: d must be at least 1");
  require(m >= d + 1, "sm_star_instance: m must be at least d + 1");
  require(m <= kMaxItems, "sm_star_instance: m exceeds the item capacity");
  require_eps(eps);
  InstanceBundle b = star_pair("sm-star", d + 1, m, eps);
  b.meta.params = {{"d", d}, {"m", m}, {"eps", eps}};
  return b;
}

InstanceBundle pos_layered_instance(int k, int d, double eps, bool include_b0) {
  require(d >= 2, "pos_layered_instance: d must be at least 2 (edge weight d/(d-1))");
  require(k >= 2, "pos_layered_instance: k must be at least 2");
  require(k % d == 0, "pos_layered_instance: k must be divisible by d");
  require_eps(eps);
  long long m_ll = include_b0 ? 1 : 0;
  for (int t = 1; t < k; ++t) m_ll += static_cast<long long>(std::llround(std::pow(k, t)));
  require(m_ll <= kMaxItems,
          "pos_layered_instance: " + std::to_string(m_ll) + " items exceed the item capacity");
  const int m = static_cast<int>(m_ll);

  std::vector<Hyperedge> strong;
  std::vector<HypergraphValuation> bidders;  // v, v', x, x' per layer
  std::vector<Money> bids;                    // same order
  std::vector<Money> critical{0.0};
  int offset = include_b0 ? 1 : 0;
  for (int t = 1; t < k; ++t) {
    const int size = static_cast<int>(std::llround(std::pow(k, t)));
    const int stars = size / d;
    const double high = std::pow(k, k - t);
    const double low = std::pow(k, k - t - 1);
    const Money weight = static_cast<double>(d) / (d - 1) * high;
    // share d/(d+k) of the stars, rounded half up
    const int high_stars = static_cast<int>(std::floor(static_cast<double>(stars) * d / (d + k) + 0.5));
    std::vector<int> high_centers;
    std::vector<int> low_centers;
    for (int s = 0; s < stars; ++s) {
      const int center = offset + s * d;
      std::vector<int> leaves(static_cast<std::size_t>(d - 1));
      std::iota(leaves.begin(), leaves.end(), center + 1);
      for (auto& e : star_edges(center, leaves, weight)) strong.push_back(e);
      (s < high_stars ? high_centers : low_centers).push_back(center);
    }
    for (int copy = 0; copy < 2; ++copy) {
      bidders.push_back(additive(m, high_centers, high + eps));
      bids.push_back(high + eps);
    }
    for (int copy = 0; copy < 2; ++copy) {
      bidders.push_back(additive(m, low_centers, low));
      bids.push_back(low);
    }
    critical.push_back(high + eps);
    critical.push_back(low);
    offset += size;
  }

  InstanceBundle b;
  b.vals.emplace_back(validate_hypergraph(m, std::move(strong)));
  for (auto& h : bidders) b.vals.emplace_back(std::move(h));
  const std::size_t n = b.vals.size();
  b.meta.name = "pos-layered";
  b.meta.params = {{"k", k}, {"d", d}, {"eps", eps}, {"include_b0", include_b0 ? 1.0 : 0.0}};
  b.meta.critical_bids = critical;
  // the center bidders win every tie and take every desired item when indifferent
  for (std::size_t i = 1; i < n; ++i) b.meta.tie.order.push_back(static_cast<int>(i));
  b.meta.tie.order.push_back(0);
  b.meta.tie.demand.assign(n, DemandTie::kMostItems);
  b.meta.tie.demand[0] = DemandTie::kFewestItems;
  b.meta.expected_opt = (k - 1) * std::pow(k, k);

  // strong bidder: lowest best response on its grid
  std::vector<Money> profile(n, 0.0);
  std::copy(bids.begin(), bids.end(), profile.begin() + 1);
  const BidGrid grid = default_grid(b.vals[0], critical);
  Money best_u = -1.0;
  Money best_bid = 0.0;
  for (Money g : grid.bids) {
    profile[0] = g;
    const Outcome o = run_single_bid(b.vals, profile, b.meta.tie);
    const Money u = agent_utility(b.vals, o, 0);
    if (u > best_u + kMoneyTol) {
      best_u = u;
      best_bid = g;
    }
  }
  profile[0] = best_bid;
  const Outcome eq = run_single_bid(b.vals, profile, b.meta.tie);
  b.meta.expected_eq_sw = eq.welfare;
  b.meta.expected_ratio = b.meta.expected_opt / eq.welfare;
  b.meta.profiles.push_back({Branch::kSingleBid, profile});
  return b;
}

InstanceBundle hybrid_lb_instance(int k, double eps) {
  require(k >= 2, "hybrid_lb_instance: k must be at least 2");
  require(k * k <= kMaxItems, "hybrid_lb_instance: k^2 exceeds the item capacity");
  require_eps(eps);
  const int m = k * k;
  const double t = static_cast<double>(k - 1) / k;
  InstanceBundle b;
  for (int s = 0; s < k; ++s) {
    std::vector<int> leaves(static_cast<std::size_t>(k - 1));
    std::iota(leaves.begin(), leaves.end(), s * k + 1);
    b.vals.emplace_back(validate_hypergraph(m, star_edges(s * k, leaves, 1.0)));
  }
  for (int s = 0; s < k; ++s) {
    const int center[] = {s * k};
    b.vals.emplace_back(additive(m, center, t + eps));
  }
  b.meta.name = "hybrid-lb";
  b.meta.params = {{"k", k}, {"eps", eps}};
  b.meta.expected_opt = k * (k - 1);
  b.meta.expected_eq_sw = (k - 1) + k * eps;
  b.meta.expected_ratio = b.meta.expected_opt / b.meta.expected_eq_sw;
  for (int s = 0; s < k; ++s) b.meta.tie.order.push_back(k + s);
  for (int s = 0; s < k; ++s) b.meta.tie.order.push_back(s);

  std::vector<Money> critical{0.0, t - eps, t, t + eps, static_cast<double>(k - 1)};
  // single-bid equilibrium: everyone at the highest star-bidder grid point
  // strictly below (k-1)/k; the center bidders win the ties
  const BidGrid star_grid = default_grid(b.vals[0], critical);
  Money level = 0.0;
  for (Money g : star_grid.bids) {
    if (g < t - kMoneyTol) level = std::max(level, g);
  }
  critical.push_back(level);
  b.meta.critical_bids = critical;
  b.meta.profiles.push_back({Branch::kSingleBid, std::vector<Money>(2 * static_cast<std::size_t>(k), level)});
  std::vector<Money> gb(2 * static_cast<std::size_t>(k), 0.0);
  std::fill(gb.begin(), gb.begin() + k, static_cast<double>(k - 1));
  b.meta.profiles.push_back({Branch::kGrandBundle, gb});
  return b;
}

InstanceBundle tight_partition_instance(int d, int T, double eps) {
  require(d >= 1, "tight_partition_instance: d must be at least 1");
  require(T >= 1, "tight_partition_instance: T must be at least 1");
  require_eps(eps);
  const int block = d * d + 1;
  const int m = T * block;
  require(static_cast<double>(d) < std::sqrt(static_cast<double>(m)),
          "tight_partition_instance: d must be below sqrt(m)");
  require(m <= kMaxItems, "tight_partition_instance: m exceeds the item capacity");
  require(eps < 1.0 / T, "tight_partition_instance: eps must leave rim weights positive");
  const auto item = [&](int t, int j) { return (t - 1) * block + j; };
  std::vector<Hyperedge> edges;
  InstanceBundle b;
  Money total = 0.0;
  Money blocks_total = 0.0;
  for (int t = 1; t <= T; ++t) {
    const double w = 1.0 / t;
    std::vector<int> q;
    for (int kk = 0; kk < d; ++kk) {
      edges.push_back({ItemSet{item(t, d * d), item(t, kk * d)}, w});
      for (int j = 1; j < d; ++j) {
        edges.push_back({ItemSet{item(t, kk * d), item(t, kk * d + j)}, w - eps});
      }
      q.push_back(item(t, kk * d));
    }
    q.push_back(item(t, d * d));
    b.meta.expected_blocks.push_back(ItemSet::of(q));
    total += d * w + d * (d - 1) * (w - eps);
    blocks_total += d * w;
  }
  b.vals.emplace_back(validate_hypergraph(m, std::move(edges)));
  b.meta.name = "tight-partition";
  b.meta.params = {{"d", d}, {"T", T}, {"eps", eps}, {"m", m}};
  b.meta.expected_opt = total;
  b.meta.expected_eq_sw = blocks_total;
  b.meta.expected_ratio = total / blocks_total;
  return b;
}

InstanceBundle complete_hypergraph_instance(int d, int k) {
  require(d >= 1, "complete_hypergraph_instance: d must be at least 1");
  require(k >= 1 && k <= d + 1, "complete_hypergraph_instance: need 1 <= k <= d + 1");
  require(d + 1 <= 24, "complete_hypergraph_instance: d + 1 exceeds 24 items");
  const int m = d + 1;
  std::vector<Hyperedge> edges;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != k) continue;
    edges.push_back({ItemSet(mask, 0), 1.0});
  }
  const double count = static_cast<double>(edges.size());
  InstanceBundle b;
  b.vals.emplace_back(validate_hypergraph(m, std::move(edges)));
  b.meta.name = "complete-hypergraph";
  b.meta.params = {{"d", d}, {"k", k}};
  b.meta.expected_opt = count;
  // C(d, k-1)
  double ratio = 1.0;
  for (int i = 0; i < k - 1; ++i) ratio = ratio * (d - i) / (i + 1);
  b.meta.expected_ratio = ratio;
  return b;
}

// -- random generators ----------------------------------------------------

namespace {

double unit_weight(std::mt19937_64& rng) {
  // (0, 1]
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::vector<int> random_subset(std::mt19937_64& rng, int m, int size) {
  std::vector<int> items(static_cast<std::size_t>(m));
  std::iota(items.begin(), items.end(), 0);
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<int> pick(i, m - 1);
    std::swap(items[static_cast<std::size_t>(i)], items[static_cast<std::size_t>(pick(rng))]);
  }
  items.resize(static_cast<std::size_t>(size));
  return items;
}

HypergraphValuation from_weights(int m, const std::map<ItemSet, Money>& w) {
  std::vector<Hyperedge> edges;
  for (const auto& [s, x] : w) edges.push_back({s, x});
  return validate_hypergraph(m, std::move(edges));
}

// Adds random edges of size in [min_size, max_size] while every item keeps at
// most d neighbours.
void grow_ps_d(std::mt19937_64& rng, int m, int d, int budget, int min_size, int max_size,
               std::map<ItemSet, Money>& w) {
  std::vector<ItemSet> nbrs(static_cast<std::size_t>(m));
  for (const auto& [s, x] : w) {
    s.for_each([&](int j) { nbrs[static_cast<std::size_t>(j)] |= s.without(j); });
  }
  max_size = std::min(max_size, m);
  if (max_size < min_size) return;
  std::uniform_int_distribution<int> size_dist(min_size, max_size);
  for (int attempt = 0; attempt < budget; ++attempt) {
    const std::vector<int> members = random_subset(rng, m, size_dist(rng));
    const ItemSet e = ItemSet::of(members);
    const double weight = unit_weight(rng);
    bool ok = true;
    for (int j : members) {
      if ((nbrs[static_cast<std::size_t>(j)] | e.without(j)).count() > d) ok = false;
    }
    if (!ok) continue;
    for (int j : members) nbrs[static_cast<std::size_t>(j)] |= e.without(j);
    w[e] += weight;
  }
}

}  // namespace

RandomGraph random_graph_valuation(int m, double p, std::uint64_t seed, int samples_per_size) {
  require(m >= 1 && m <= kMaxItems, "random_graph_valuation: m out of range");
  require(p >= 0.0 && p <= 1.0, "random_graph_valuation: p must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Hyperedge> edges;
  std::vector<ItemSet> adj(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    for (int c = a + 1; c < m; ++c) {
      if (!coin(rng)) continue;
      edges.push_back({ItemSet{a, c}, 1.0});
      adj[static_cast<std::size_t>(a)].insert(c);
      adj[static_cast<std::size_t>(c)].insert(a);
    }
  }
  GraphPropertyReport r;
  r.d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  r.edges = static_cast<int>(edges.size());
  for (const ItemSet& a : adj) r.max_degree = std::max(r.max_degree, a.count());
  r.degree_bounded = r.max_degree <= r.d;
  r.enough_edges = 9.0 * r.edges >= std::pow(r.d, 3);
  const double log_d = std::log(std::max(r.d, 1));
  for (int k = 1; k <= std::min(r.d + 1, m); ++k) {
    const double cap = 12.0 * k * log_d;
    if (k * (k - 1) / 2.0 <= cap) continue;
    for (int s = 0; s < samples_per_size; ++s) {
      const ItemSet set = ItemSet::of(random_subset(rng, m, k));
      int inside = 0;
      set.for_each([&](int j) { inside += (adj[static_cast<std::size_t>(j)] & set).count(); });
      inside /= 2;
      ++r.sampled_sets;
      r.worst_set_edges = std::max(r.worst_set_edges, inside);
      if (inside > cap) r.sparse_sets = false;
    }
  }
  return {validate_hypergraph(m, std::move(edges)), r};
}

HypergraphValuation random_ps_d(int m, int d, int edge_budget, std::uint64_t seed,
                                int max_edge_size) {
  require(m >= 1 && m <= kMaxItems, "random_ps_d: m out of range");
  require(d >= 0, "random_ps_d: d must be nonnegative");
  std::mt19937_64 rng(seed);
  std::map<ItemSet, Money> w;
  grow_ps_d(rng, m, d, edge_budget, 1, max_edge_size < 0 ? d + 1 : max_edge_size, w);
  return from_weights(m, w);
}

HypergraphValuation random_ph2_sm_d(int m, int d, int edge_budget, std::uint64_t seed) {
  require(m >= 1 && m <= kMaxItems, "random_ph2_sm_d: m out of range");
  require(d >= 0, "random_ph2_sm_d: d must be nonnegative");
  std::mt19937_64 rng(seed);
  std::map<ItemSet, Money> w;
  for (int j = 0; j < m; ++j) w[ItemSet{j}] = unit_weight(rng);
  grow_ps_d(rng, m, d, edge_budget, 2, 2, w);
  return from_weights(m, w);
}

Valuation random_mps_d(int m, int d, int parts, int edge_budget, std::uint64_t seed) {
  require(parts >= 1, "random_mps_d: need at least one part");
  std::mt19937_64 rng(seed);
  std::vector<HypergraphValuation> hs;
  for (int i = 0; i < parts; ++i) hs.push_back(random_ps_d(m, d, edge_budget, rng()));
  if (parts == 1) return Valuation(std::move(hs.front()));
  return Valuation(MaxValuation(std::move(hs)));
}

HypergraphValuation random_block_uniform(int m, int d, std::uint64_t seed) {
  require(m >= 1 && m <= kMaxItems, "random_block_uniform: m out of range");
  require(d >= 1, "random_block_uniform: d must be at least 1");
  std::mt19937_64 rng(seed);
  const int covered = std::uniform_int_distribution<int>(1, m)(rng);
  const std::vector<int> items = random_subset(rng, m, covered);
  const double unit = 0.1 + 0.9 * unit_weight(rng);
  std::vector<Hyperedge> edges;
  std::size_t pos = 0;
  while (pos < items.size()) {
    const auto size = std::min<std::size_t>(
        static_cast<std::size_t>(std::uniform_int_distribution<int>(1, d)(rng)),
        items.size() - pos);
    const std::vector<int> members(items.begin() + static_cast<std::ptrdiff_t>(pos),
                                   items.begin() + static_cast<std::ptrdiff_t>(pos + size));
    edges.push_back({ItemSet::of(members), unit * static_cast<double>(size)});
    pos += size;
  }
  return validate_hypergraph(m, std::move(edges));
}

Valuation random_general(int m, std::uint64_t seed) {
  require(m >= 1 && m <= kMaxItems, "random_general: m out of range");
  std::mt19937_64 rng(seed);
  const int parts = std::uniform_int_distribution<int>(1, 3)(rng);
  std::vector<HypergraphValuation> hs;
  for (int p = 0; p < parts; ++p) {
    std::map<ItemSet, Money> w;
    const int edges = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int e = 0; e < edges; ++e) {
      const int size = std::uniform_int_distribution<int>(1, m)(rng);
      w[ItemSet::of(random_subset(rng, m, size))] += unit_weight(rng);
    }
    hs.push_back(from_weights(m, w));
  }
  if (parts == 1) return Valuation(std::move(hs.front()));
  return Valuation(MaxValuation(std::move(hs)));
}

}  // namespace sbalab
