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

#include "sbalab/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>

namespace sbalab {

namespace {

std::size_t as_index(int i) { return static_cast<std::size_t>(i); }

std::uint64_t money_bits(Money x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

struct ChoiceKey {
  ItemSet available;
  std::uint64_t price;
  bool operator==(const ChoiceKey&) const = default;
};

struct ChoiceKeyHash {
  std::size_t operator()(const ChoiceKey& k) const noexcept {
    return k.available.hash() ^ (k.price * 0x9E3779B97F4A7C15ULL);
  }
};

std::vector<int> tie_ranks(const TieRule& tie, std::size_t n) {
  std::vector<int> rank(n);
  if (tie.order.empty()) {
    std::iota(rank.begin(), rank.end(), 0);
  } else {
    if (tie.order.size() != n) throw PreconditionError("tie order has the wrong length");
    for (std::size_t pos = 0; pos < n; ++pos) rank[as_index(tie.order[pos])] = static_cast<int>(pos);
  }
  return rank;
}

std::size_t profile_hash(const ProfileIndex& p) {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& slot : p.idx) {
    for (int a : slot) h = (h ^ static_cast<std::size_t>(a)) * 1099511628211ULL;
    h = (h ^ 0xFF) * 1099511628211ULL;
  }
  return h;
}

Money money_tol_max(std::span<const Money> xs) {
  return *std::max_element(xs.begin(), xs.end());
}

}  // namespace

std::string_view mechanism_name(MechanismKind k) {
  switch (k) {
    case MechanismKind::kSingleBid:
      return "single-bid";
    case MechanismKind::kGrandBundle:
      return "grand-bundle";
    case MechanismKind::kHybrid:
      return "hybrid";
  }
  return "?";
}

MechanismKind parse_mechanism(std::string_view name) {
  if (name == "single-bid" || name == "sb") return MechanismKind::kSingleBid;
  if (name == "grand-bundle" || name == "gb") return MechanismKind::kGrandBundle;
  if (name == "hybrid" || name == "hyb") return MechanismKind::kHybrid;
  throw DomainError("unknown mechanism '" + std::string(name) + "'");
}

std::vector<Branch> MechanismSpec::branches() const {
  switch (kind) {
    case MechanismKind::kSingleBid:
      return {Branch::kSingleBid};
    case MechanismKind::kGrandBundle:
      return {Branch::kGrandBundle};
    case MechanismKind::kHybrid:
      return {Branch::kSingleBid, Branch::kGrandBundle};
  }
  return {};
}

double MechanismSpec::branch_weight(std::size_t c) const {
  if (kind != MechanismKind::kHybrid) return 1.0;
  return c == 0 ? p : 1.0 - p;
}

std::size_t BidGrid::index_of(Money b) const {
  for (std::size_t a = 0; a < bids.size(); ++a) {
    if (std::abs(bids[a] - b) <= kMoneyTol) return a;
  }
  throw PreconditionError("bid " + std::to_string(b) + " is not on the grid");
}

BidGrid default_grid(const Valuation& v, std::span<const Money> critical, double ratio) {
  if (!(ratio > 1.0)) throw DomainError("default_grid: ratio must exceed 1");
  Money top = v.grand_value();
  if (!(top > 0.0)) top = 1.0;
  std::vector<Money> bids{0.0};
  for (Money b = 1e-3 * top; b < top; b *= ratio) bids.push_back(b);
  bids.push_back(top);
  for (Money c : critical) {
    if (!(c >= 0.0)) throw DomainError("default_grid: negative critical bid");
    bids.push_back(c);
  }
  std::sort(bids.begin(), bids.end());
  bids.erase(std::unique(bids.begin(), bids.end()), bids.end());
  return BidGrid{std::move(bids)};
}

std::vector<BidGrid> default_grids(std::span<const Valuation> vals,
                                   std::span<const Money> critical, double ratio) {
  std::vector<BidGrid> out;
  for (const Valuation& v : vals) out.push_back(default_grid(v, critical, ratio));
  return out;
}

std::vector<Money> slot_bids(const ProfileIndex& p, std::size_t c,
                             std::span<const BidGrid> grids) {
  std::vector<Money> bids(p.idx[c].size());
  for (std::size_t i = 0; i < bids.size(); ++i) bids[i] = grids[i].bids[as_index(p.idx[c][i])];
  return bids;
}

// ---------------------------------------------------------------------------
// GameOracle

struct GameOracle::Impl {
  std::vector<Valuation> vals;
  MechanismSpec mech;
  std::vector<int> rank;
  std::vector<Money> grand;
  int m = 0;
  std::vector<std::unordered_map<ItemSet, std::vector<Money>>> envelopes;
  std::vector<std::unordered_map<ChoiceKey, ItemSet, ChoiceKeyHash>> choices;

  ItemSet choose(int i, const ItemSet& avail, Money price) {
    auto& cache = choices[as_index(i)];
    const ChoiceKey key{avail, money_bits(price)};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const ItemSet s = demand_select(vals[as_index(i)], avail, price, mech.tie.demand_tie(i));
    cache.emplace(key, s);
    return s;
  }

  const std::vector<Money>& envelope(int i, const ItemSet& avail) {
    auto& cache = envelopes[as_index(i)];
    if (auto it = cache.find(avail); it != cache.end()) return it->second;
    return cache.emplace(avail, demand_envelope(vals[as_index(i)], avail)).first->second;
  }

  // Visit order of everyone but `agent`.
  std::vector<int> others(std::span<const Money> bids, int agent) const {
    std::vector<int> order;
    for (int i : visit_order(bids, mech.tie)) {
      if (i != agent) order.push_back(i);
    }
    return order;
  }

  // Number of others visited before `agent` when it bids b.
  std::size_t position(std::span<const Money> bids, const std::vector<int>& order, int agent,
                       Money b) const {
    std::size_t k = 0;
    while (k < order.size()) {
      const int o = order[k];
      const Money bo = bids[as_index(o)];
      const bool before = bo > b || (bo == b && rank[as_index(o)] < rank[as_index(agent)]);
      if (!before) break;
      ++k;
    }
    return k;
  }
};

GameOracle::GameOracle(std::span<const Valuation> vals, MechanismSpec mech)
    : impl_(std::make_unique<Impl>()) {
  if (vals.empty()) throw PreconditionError("GameOracle: no agents");
  impl_->vals.assign(vals.begin(), vals.end());
  impl_->mech = std::move(mech);
  impl_->rank = tie_ranks(impl_->mech.tie, vals.size());
  impl_->m = vals.front().m();
  for (const Valuation& v : vals) {
    if (v.m() != impl_->m) throw PreconditionError("GameOracle: valuations disagree on m");
    impl_->grand.push_back(v.grand_value());
  }
  impl_->envelopes.resize(vals.size());
  impl_->choices.resize(vals.size());
}

GameOracle::~GameOracle() = default;
GameOracle::GameOracle(GameOracle&&) noexcept = default;
GameOracle& GameOracle::operator=(GameOracle&&) noexcept = default;

std::size_t GameOracle::agents() const { return impl_->vals.size(); }
const MechanismSpec& GameOracle::mechanism() const { return impl_->mech; }

void GameOracle::counterfactuals(Branch b, std::span<const Money> bids, int agent,
                                 std::span<const Money> grid, std::span<Money> out) {
  Impl& g = *impl_;
  const std::vector<int> order = g.others(bids, agent);
  if (b == Branch::kGrandBundle) {
    std::size_t first_accept = order.size();
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int o = order[k];
      if (g.grand[as_index(o)] - bids[as_index(o)] >= -kMoneyTol) {
        first_accept = k;
        break;
      }
    }
    const Money mine = g.grand[as_index(agent)];
    for (std::size_t a = 0; a < grid.size(); ++a) {
      const std::size_t k = g.position(bids, order, agent, grid[a]);
      const bool accepts = mine - grid[a] >= -kMoneyTol;
      out[a] = (k <= first_accept && accepts) ? mine - grid[a] : 0.0;
    }
    return;
  }
  // remaining[k]: unsold goods after the first k others
  std::vector<ItemSet> remaining{ItemSet::range(g.m)};
  for (int o : order) {
    const ItemSet& u = remaining.back();
    remaining.push_back(u.empty() ? u : u - g.choose(o, u, bids[as_index(o)]));
  }
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const std::size_t k = g.position(bids, order, agent, grid[a]);
    const std::vector<Money>& env = g.envelope(agent, remaining[k]);
    Money best = 0.0;
    for (std::size_t c = 1; c < env.size(); ++c) {
      best = std::max(best, env[c] - static_cast<double>(c) * grid[a]);
    }
    out[a] = best;
  }
}

Outcome GameOracle::run(Branch b, std::span<const Money> bids) {
  Impl& g = *impl_;
  if (b == Branch::kGrandBundle) return run_grand_bundle(g.vals, bids, g.mech.tie);
  Outcome o;
  o.alloc.assign(g.vals.size(), ItemSet{});
  o.payments.assign(g.vals.size(), 0.0);
  o.item_prices.assign(as_index(g.m), 0.0);
  ItemSet remaining = ItemSet::range(g.m);
  for (int i : visit_order(bids, g.mech.tie)) {
    if (remaining.empty()) break;
    const auto ui = as_index(i);
    const ItemSet s = g.choose(i, remaining, bids[ui]);
    if (s.empty()) continue;
    o.alloc[ui] = s;
    o.payments[ui] = bids[ui] * s.count();
    s.for_each([&](int j) { o.item_prices[as_index(j)] = bids[ui]; });
    o.welfare += g.vals[ui].value(s);
    remaining -= s;
  }
  return o;
}

std::vector<Money> GameOracle::utilities(const ProfileIndex& p, std::span<const BidGrid> grids) {
  const auto branches = impl_->mech.branches();
  std::vector<Money> u(agents(), 0.0);
  for (std::size_t c = 0; c < branches.size(); ++c) {
    const Outcome o = run(branches[c], slot_bids(p, c, grids));
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += impl_->mech.branch_weight(c) *
              agent_utility(impl_->vals, o, static_cast<int>(i));
    }
  }
  return u;
}

Money GameOracle::welfare(const ProfileIndex& p, std::span<const BidGrid> grids) {
  const auto branches = impl_->mech.branches();
  Money sw = 0.0;
  for (std::size_t c = 0; c < branches.size(); ++c) {
    sw += impl_->mech.branch_weight(c) * run(branches[c], slot_bids(p, c, grids)).welfare;
  }
  return sw;
}

// ---------------------------------------------------------------------------
// No-regret play

Money PlayHistory::mean_welfare() const {
  if (welfare.empty()) return 0.0;
  return std::accumulate(welfare.begin(), welfare.end(), 0.0) / static_cast<double>(welfare.size());
}

PlayHistory no_regret_run(std::span<const Valuation> vals, const MechanismSpec& mech,
                          std::span<const BidGrid> grids, int rounds, std::uint64_t seed,
                          RateSchedule rate) {
  if (rounds < 1) throw PreconditionError("no_regret_run: rounds must be >= 1");
  if (grids.size() != vals.size()) throw PreconditionError("no_regret_run: one grid per agent");
  const std::size_t n = vals.size();
  const auto branches = mech.branches();
  const std::size_t slots = branches.size();
  GameOracle oracle(vals, mech);

  PlayHistory h;
  h.mech = mech;
  h.rounds = rounds;
  h.seed = seed;
  h.cf_sum.assign(n, {});
  h.realized_sum.assign(n, std::vector<Money>(slots, 0.0));
  std::vector<std::vector<std::vector<double>>> gains(n);
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (grids[i].bids.empty()) throw PreconditionError("no_regret_run: empty grid");
    h.cf_sum[i].assign(slots, std::vector<Money>(grids[i].size(), 0.0));
    gains[i].assign(slots, std::vector<double>(grids[i].size(), 0.0));
    const Money top = vals[i].grand_value();
    scale[i] = top > 0.0 ? top : 1.0;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> prob;
  std::vector<Money> cf;
  h.actions.reserve(static_cast<std::size_t>(rounds));
  for (int t = 1; t <= rounds; ++t) {
    ProfileIndex p;
    p.idx.assign(slots, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(grids[i].size());
      const double eta = rate.scale * std::sqrt(8.0 * std::log(std::max(k, 2.0)) / t);
      for (std::size_t c = 0; c < slots; ++c) {
        const auto& g = gains[i][c];
        const double top = *std::max_element(g.begin(), g.end());
        prob.resize(g.size());
        double total = 0.0;
        for (std::size_t a = 0; a < g.size(); ++a) total += prob[a] = std::exp(eta * (g[a] - top));
        double r = unit(rng) * total;
        std::size_t a = 0;
        while (a + 1 < g.size() && r >= prob[a]) r -= prob[a++];
        p.idx[c][i] = static_cast<int>(a);
      }
    }
    std::vector<Money> util(n, 0.0);
    Money sw = 0.0;
    for (std::size_t c = 0; c < slots; ++c) {
      const double w = mech.branch_weight(c);
      const std::vector<Money> bids = slot_bids(p, c, grids);
      for (std::size_t i = 0; i < n; ++i) {
        cf.resize(grids[i].size());
        oracle.counterfactuals(branches[c], bids, static_cast<int>(i), grids[i].bids, cf);
        for (std::size_t a = 0; a < cf.size(); ++a) {
          h.cf_sum[i][c][a] += w * cf[a];
          gains[i][c][a] += w * cf[a] / scale[i];
        }
        const Money mine = w * cf[as_index(p.idx[c][i])];
        h.realized_sum[i][c] += mine;
        util[i] += mine;
      }
      sw += w * oracle.run(branches[c], bids).welfare;
    }
    h.actions.push_back(std::move(p));
    h.utility.push_back(std::move(util));
    h.welfare.push_back(sw);
  }
  return h;
}

Money regret_of(const PlayHistory& h, int agent) {
  const auto i = as_index(agent);
  Money regret = 0.0;
  for (std::size_t c = 0; c < h.cf_sum[i].size(); ++c) {
    regret += money_tol_max(h.cf_sum[i][c]) - h.realized_sum[i][c];
  }
  return regret / h.rounds;
}

Money regret_by_replay(std::span<const Valuation> vals, std::span<const BidGrid> grids,
                       const PlayHistory& h, int agent) {
  const auto branches = h.mech.branches();
  const auto i = as_index(agent);
  Money regret = 0.0;
  for (std::size_t c = 0; c < branches.size(); ++c) {
    const double w = h.mech.branch_weight(c);
    std::vector<Money> dev(grids[i].size(), 0.0);
    Money realized = 0.0;
    for (const ProfileIndex& p : h.actions) {
      std::vector<Money> bids = slot_bids(p, c, grids);
      auto run = [&](std::span<const Money> b) {
        return branches[c] == Branch::kSingleBid ? run_single_bid(vals, b, h.mech.tie)
                                                 : run_grand_bundle(vals, b, h.mech.tie);
      };
      realized += w * agent_utility(vals, run(bids), agent);
      for (std::size_t a = 0; a < dev.size(); ++a) {
        bids[i] = grids[i].bids[a];
        dev[a] += w * agent_utility(vals, run(bids), agent);
      }
    }
    regret += money_tol_max(dev) - realized;
  }
  return regret / h.rounds;
}

void write_history_csv(std::ostream& os, const PlayHistory& h, std::span<const BidGrid> grids) {
  os << "round,agent,bid,utility,realized_sw\n";
  char buf[64];
  auto fmt = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::string(buf);
  };
  for (std::size_t t = 0; t < h.actions.size(); ++t) {
    const ProfileIndex& p = h.actions[t];
    for (std::size_t i = 0; i < h.utility[t].size(); ++i) {
      std::string bid;
      for (std::size_t c = 0; c < p.idx.size(); ++c) {
        if (c > 0) bid += ';';
        bid += fmt(grids[i].bids[as_index(p.idx[c][i])]);
      }
      os << t + 1 << ',' << i << ',' << bid << ',' << fmt(h.utility[t][i]) << ','
         << fmt(h.welfare[t]) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Pure equilibria

ProfileIndex zero_profile(const MechanismSpec& mech, std::size_t n) {
  ProfileIndex p;
  p.idx.assign(mech.branches().size(), std::vector<int>(n, 0));
  return p;
}

BestResponseResult best_response_dynamics(std::span<const Valuation> vals,
                                          const MechanismSpec& mech,
                                          std::span<const BidGrid> grids, ProfileIndex start,
                                          int max_sweeps) {
  const std::size_t n = vals.size();
  const auto branches = mech.branches();
  if (start.idx.size() != branches.size()) {
    throw PreconditionError("best_response_dynamics: profile has the wrong number of slots");
  }
  GameOracle oracle(vals, mech);
  BestResponseResult r;
  r.profile = std::move(start);
  std::unordered_map<std::size_t, std::vector<std::size_t>> seen;  // hash -> history slots
  std::vector<ProfileIndex> trail{r.profile};
  seen[profile_hash(r.profile)].push_back(0);
  std::vector<Money> cf;
  for (r.sweeps = 1; r.sweeps <= max_sweeps; ++r.sweeps) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < branches.size(); ++c) {
        const std::vector<Money> bids = slot_bids(r.profile, c, grids);
        cf.resize(grids[i].size());
        oracle.counterfactuals(branches[c], bids, static_cast<int>(i), grids[i].bids, cf);
        const Money current = cf[as_index(r.profile.idx[c][i])];
        const Money best = money_tol_max(cf);
        if (best <= current + kMoneyTol) continue;
        std::size_t a = 0;
        while (!(cf[a] > current + kMoneyTol && cf[a] >= best - kMoneyTol)) ++a;
        r.profile.idx[c][i] = static_cast<int>(a);
        ++r.moves;
        moved = true;
      }
    }
    if (!moved) {
      r.converged = true;
      return r;
    }
    auto& slots = seen[profile_hash(r.profile)];
    for (std::size_t s : slots) {
      if (trail[s] == r.profile) {
        r.cycle.assign(trail.begin() + static_cast<std::ptrdiff_t>(s), trail.end());
        return r;
      }
    }
    slots.push_back(trail.size());
    trail.push_back(r.profile);
  }
  r.sweeps = max_sweeps;
  return r;
}

DeviationAudit audit_profile(std::span<const Valuation> vals, const MechanismSpec& mech,
                             std::span<const BidGrid> grids, const ProfileIndex& profile) {
  const auto branches = mech.branches();
  DeviationAudit audit;
  audit.max_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < branches.size(); ++c) {
    const double w = mech.branch_weight(c);
    auto run = [&](std::span<const Money> b) {
      return branches[c] == Branch::kSingleBid ? run_single_bid(vals, b, mech.tie)
                                               : run_grand_bundle(vals, b, mech.tie);
    };
    std::vector<Money> bids = slot_bids(profile, c, grids);
    const Outcome base = run(bids);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const Money here = agent_utility(vals, base, static_cast<int>(i));
      const Money own = bids[i];
      for (Money dev : grids[i].bids) {
        bids[i] = dev;
        const Money gain = w * (agent_utility(vals, run(bids), static_cast<int>(i)) - here);
        if (gain > audit.max_gain) {
          audit.max_gain = gain;
          audit.agent = static_cast<int>(i);
          audit.slot = c;
          audit.deviation_bid = dev;
        }
      }
      bids[i] = own;
    }
  }
  return audit;
}

std::vector<ProfileIndex> enumerate_pure_equilibria(std::span<const Valuation> vals,
                                                    const MechanismSpec& mech,
                                                    std::span<const BidGrid> grids,
                                                    std::uint64_t limit) {
  const std::size_t n = vals.size();
  const auto branches = mech.branches();
  const std::size_t slots = branches.size();
  double count = 1.0;
  for (std::size_t c = 0; c < slots; ++c) {
    for (std::size_t i = 0; i < n; ++i) count *= static_cast<double>(grids[i].size());
  }
  if (count > static_cast<double>(limit)) {
    throw CapacityError("enumerate_pure_equilibria: " + std::to_string(count) +
                        " profiles exceed the limit of " + std::to_string(limit));
  }
  GameOracle oracle(vals, mech);
  std::vector<ProfileIndex> out;
  ProfileIndex p = zero_profile(mech, n);
  std::vector<Money> cf;
  while (true) {
    bool stable = true;
    for (std::size_t c = 0; c < slots && stable; ++c) {
      const std::vector<Money> bids = slot_bids(p, c, grids);
      for (std::size_t i = 0; i < n && stable; ++i) {
        cf.resize(grids[i].size());
        oracle.counterfactuals(branches[c], bids, static_cast<int>(i), grids[i].bids, cf);
        stable = money_tol_max(cf) <= cf[as_index(p.idx[c][i])] + kMoneyTol;
      }
    }
    if (stable) out.push_back(p);
    // mixed-radix increment
    std::size_t c = 0;
    std::size_t i = 0;
    while (c < slots) {
      if (++p.idx[c][i] < static_cast<int>(grids[i].size())) break;
      p.idx[c][i] = 0;
      if (++i == n) {
        i = 0;
        ++c;
      }
    }
    if (c == slots) break;
  }
  return out;
}

PoaEstimate poa_estimate(Money opt, std::span<const Money> equilibrium_welfare) {
  if (equilibrium_welfare.empty()) throw PreconditionError("poa_estimate: no equilibria");
  PoaEstimate e;
  e.opt = opt;
  e.worst_sw = *std::min_element(equilibrium_welfare.begin(), equilibrium_welfare.end());
  e.best_sw = *std::max_element(equilibrium_welfare.begin(), equilibrium_welfare.end());
  auto ratio = [&](Money sw) {
    return sw > 0.0 ? opt / sw : std::numeric_limits<double>::infinity();
  };
  e.ratio_worst = ratio(e.worst_sw);
  e.ratio_best = ratio(e.best_sw);
  return e;
}

}  // namespace sbalab
