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

// The single-bid auction, the first-price grand-bundle auction and their
// randomized combination.
//
// All runs are deterministic functions of (valuations, bids, tie rule).

#ifndef SBALAB_MECHANISMS_HPP_
#define SBALAB_MECHANISMS_HPP_

#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sbalab/item_set.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

struct TieRule {
  // Agents listed earlier win ties between equal bids; empty means
  // ascending agent index. Otherwise a permutation of 0..n-1.
  std::vector<int> order;
  // Per-agent bundle tie rule; missing entries mean kFewestItems.
  std::vector<DemandTie> demand;

  DemandTie demand_tie(int agent) const {
    return static_cast<std::size_t>(agent) < demand.size()
               ? demand[static_cast<std::size_t>(agent)]
               : DemandTie::kFewestItems;
  }
};

struct Outcome {
  std::vector<ItemSet> alloc;
  std::vector<Money> payments;
  // price of item j: the bid of its holder, 0 when unsold
  std::vector<Money> item_prices;
  Money welfare = 0.0;
};

// Agents in decreasing bid order; ties by `tie.order`.
std::vector<int> visit_order(std::span<const Money> bids, const TieRule& tie);

// Each agent, in visit order, buys a utility-maximizing bundle of the unsold
// items at its own bid per item.
Outcome run_single_bid(std::span<const Valuation> vals, std::span<const Money> bids,
                       const TieRule& tie = {});

// The grand bundle is offered in visit order at the agent's own bid; the
// first agent whose value for it is at least the bid (within kMoneyTol)
// buys it. Everyone else pays nothing.
Outcome run_grand_bundle(std::span<const Valuation> vals, std::span<const Money> bids,
                         const TieRule& tie = {});

enum class Branch { kSingleBid, kGrandBundle };
std::string_view branch_name(Branch b);

// Both branches are run; expectations are exact.
struct HybridOutcome {
  Outcome sb;
  Outcome gb;
  double p = 0.5;  // probability of the single-bid branch
  std::optional<Branch> realized;

  Money expected_welfare() const { return p * sb.welfare + (1.0 - p) * gb.welfare; }
  Money expected_payment(int agent) const;
  Money expected_revenue() const;
  const Outcome* realized_outcome() const;
};

// `forced` fixes the realized branch; otherwise `rng`, when given, draws it.
HybridOutcome run_hybrid(std::span<const Valuation> vals, std::span<const Money> sb_bids,
                         std::span<const Money> gb_bids, double p, const TieRule& tie = {},
                         std::optional<Branch> forced = std::nullopt,
                         std::mt19937_64* rng = nullptr);

// Copy of outcome.item_prices.
std::vector<Money> item_prices(const Outcome& outcome);

// v_i(alloc_i) - payment_i.
Money agent_utility(std::span<const Valuation> vals, const Outcome& outcome, int agent);

Money total_payments(const Outcome& outcome);

}  // namespace sbalab

#endif  // SBALAB_MECHANISMS_HPP_
