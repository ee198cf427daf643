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

#include "sbalab/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sbalab {

namespace {

int common_m(std::span<const Valuation> vals, std::span<const Money> bids) {
  if (vals.size() != bids.size()) {
    throw PreconditionError("mechanism: " + std::to_string(vals.size()) + " valuations but " +
                            std::to_string(bids.size()) + " bids");
  }
  if (vals.empty()) throw PreconditionError("mechanism: no agents");
  const int m = vals.front().m();
  for (const Valuation& v : vals) {
    if (v.m() != m) throw PreconditionError("mechanism: valuations disagree on m");
  }
  for (Money b : bids) {
    if (!(b >= 0.0)) throw DomainError("mechanism: bids must be nonnegative");
  }
  return m;
}

Outcome empty_outcome(std::size_t n, int m) {
  Outcome o;
  o.alloc.assign(n, ItemSet{});
  o.payments.assign(n, 0.0);
  o.item_prices.assign(static_cast<std::size_t>(m), 0.0);
  return o;
}

}  // namespace

std::vector<int> visit_order(std::span<const Money> bids, const TieRule& tie) {
  const std::size_t n = bids.size();
  std::vector<int> rank(n);
  if (tie.order.empty()) {
    std::iota(rank.begin(), rank.end(), 0);
  } else {
    if (tie.order.size() != n) throw PreconditionError("tie order has the wrong length");
    std::vector<bool> seen(n, false);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const int a = tie.order[pos];
      if (a < 0 || static_cast<std::size_t>(a) >= n || seen[static_cast<std::size_t>(a)]) {
        throw PreconditionError("tie order is not a permutation");
      }
      seen[static_cast<std::size_t>(a)] = true;
      rank[static_cast<std::size_t>(a)] = static_cast<int>(pos);
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Money ba = bids[static_cast<std::size_t>(a)];
    const Money bb = bids[static_cast<std::size_t>(b)];
    if (ba != bb) return ba > bb;
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  });
  return order;
}

Outcome run_single_bid(std::span<const Valuation> vals, std::span<const Money> bids,
                       const TieRule& tie) {
  const int m = common_m(vals, bids);
  Outcome o = empty_outcome(vals.size(), m);
  ItemSet remaining = ItemSet::range(m);
  for (int i : visit_order(bids, tie)) {
    if (remaining.empty()) break;
    const auto ui = static_cast<std::size_t>(i);
    const ItemSet s = demand_select(vals[ui], remaining, bids[ui], tie.demand_tie(i));
    if (s.empty()) continue;
    o.alloc[ui] = s;
    o.payments[ui] = bids[ui] * s.count();
    s.for_each([&](int j) { o.item_prices[static_cast<std::size_t>(j)] = bids[ui]; });
    o.welfare += vals[ui].value(s);
    remaining -= s;
  }
  return o;
}

Outcome run_grand_bundle(std::span<const Valuation> vals, std::span<const Money> bids,
                         const TieRule& tie) {
  const int m = common_m(vals, bids);
  Outcome o = empty_outcome(vals.size(), m);
  for (int i : visit_order(bids, tie)) {
    const auto ui = static_cast<std::size_t>(i);
    const Money grand = vals[ui].grand_value();
    if (grand - bids[ui] < -kMoneyTol) continue;  // declines; offer passes on
    o.alloc[ui] = ItemSet::range(m);
    o.payments[ui] = bids[ui];
    std::fill(o.item_prices.begin(), o.item_prices.end(), bids[ui]);
    o.welfare = grand;
    break;
  }
  return o;
}

std::string_view branch_name(Branch b) {
  return b == Branch::kSingleBid ? "single-bid" : "grand-bundle";
}

Money HybridOutcome::expected_payment(int agent) const {
  const auto a = static_cast<std::size_t>(agent);
  return p * sb.payments[a] + (1.0 - p) * gb.payments[a];
}

Money HybridOutcome::expected_revenue() const {
  return p * total_payments(sb) + (1.0 - p) * total_payments(gb);
}

const Outcome* HybridOutcome::realized_outcome() const {
  if (!realized) return nullptr;
  return *realized == Branch::kSingleBid ? &sb : &gb;
}

HybridOutcome run_hybrid(std::span<const Valuation> vals, std::span<const Money> sb_bids,
                         std::span<const Money> gb_bids, double p, const TieRule& tie,
                         std::optional<Branch> forced, std::mt19937_64* rng) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("run_hybrid: p must lie in (0, 1)");
  HybridOutcome h;
  h.p = p;
  h.sb = run_single_bid(vals, sb_bids, tie);
  h.gb = run_grand_bundle(vals, gb_bids, tie);
  if (forced) {
    h.realized = forced;
  } else if (rng != nullptr) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    h.realized = coin(*rng) < p ? Branch::kSingleBid : Branch::kGrandBundle;
  }
  return h;
}

std::vector<Money> item_prices(const Outcome& outcome) { return outcome.item_prices; }

Money agent_utility(std::span<const Valuation> vals, const Outcome& outcome, int agent) {
  const auto a = static_cast<std::size_t>(agent);
  return vals[a].value(outcome.alloc[a]) - outcome.payments[a];
}

Money total_payments(const Outcome& outcome) {
  return std::accumulate(outcome.payments.begin(), outcome.payments.end(), 0.0);
}

}  // namespace sbalab
