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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sbalab/instances.hpp"
#include "sbalab/optimizer.hpp"
#include "support/oracles.hpp"

namespace sbalab {
namespace {

std::vector<Valuation> small_profile(std::uint64_t seed, int n = 3, int m = 5) {
  std::vector<Valuation> vals;
  for (int i = 0; i < n; ++i) vals.push_back(random_mps_d(m, 2, 2, m, seed * 10 + i));
  return vals;
}

TEST(Learning, MechanismNames) {
  EXPECT_EQ(parse_mechanism("hybrid"), MechanismKind::kHybrid);
  EXPECT_EQ(mechanism_name(MechanismKind::kGrandBundle), "grand-bundle");
  EXPECT_THROW(parse_mechanism("vcg"), DomainError);
  MechanismSpec h{MechanismKind::kHybrid, 0.3, {}};
  EXPECT_EQ(h.branches().size(), 2u);
  EXPECT_DOUBLE_EQ(h.branch_weight(0), 0.3);
  EXPECT_DOUBLE_EQ(h.branch_weight(1), 0.7);
}

TEST(Learning, GridContainsZeroTopAndCriticalBids) {
  const Valuation v(validate_hypergraph(2, {{ItemSet{0, 1}, 2.0}}));
  const std::vector<Money> critical{0.123456};
  const BidGrid g = default_grid(v, critical);
  EXPECT_DOUBLE_EQ(g.bids.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.bids.back(), 2.0);
  EXPECT_NO_THROW(g.index_of(0.123456));
  EXPECT_TRUE(std::is_sorted(g.bids.begin(), g.bids.end()));
  EXPECT_THROW(g.index_of(0.5555), PreconditionError);
  EXPECT_THROW(default_grid(v, {}, 1.0), DomainError);
}

TEST(Learning, CounterfactualsMatchDirectRuns) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto vals = small_profile(seed);
    for (MechanismKind kind : {MechanismKind::kSingleBid, MechanismKind::kGrandBundle}) {
      const MechanismSpec mech{kind, 0.5, {}};
      const Branch b = kind == MechanismKind::kSingleBid ? Branch::kSingleBid : Branch::kGrandBundle;
      GameOracle game(vals, mech);
      const auto grids = default_grids(vals, {}, 1.3);
      std::mt19937_64 rng(seed);
      std::vector<Money> bids(3);
      for (std::size_t i = 0; i < 3; ++i) bids[i] = grids[i].bids[rng() % grids[i].size()];
      for (int agent = 0; agent < 3; ++agent) {
        const auto& grid = grids[static_cast<std::size_t>(agent)].bids;
        std::vector<Money> out(grid.size());
        game.counterfactuals(b, bids, agent, grid, out);
        for (std::size_t a = 0; a < grid.size(); ++a) {
          std::vector<Money> dev = bids;
          dev[static_cast<std::size_t>(agent)] = grid[a];
          const auto want = b == Branch::kSingleBid
                                ? oracle::brute_single_bid_utilities(vals, dev, {})
                                : oracle::brute_grand_bundle_utilities(vals, dev);
          EXPECT_NEAR(out[a], want[static_cast<std::size_t>(agent)], 1e-9);
        }
      }
      const Outcome o = game.run(b, bids);
      const Outcome direct = b == Branch::kSingleBid ? run_single_bid(vals, bids) : run_grand_bundle(vals, bids);
      EXPECT_EQ(o.alloc, direct.alloc);
    }
  }
}

TEST(Learning, RegretBookkeepingMatchesReplay) {
  const auto vals = small_profile(4);
  const auto grids = default_grids(vals, {}, 1.4);
  for (MechanismKind kind : {MechanismKind::kSingleBid, MechanismKind::kHybrid}) {
    const MechanismSpec mech{kind, 0.5, {}};
    const PlayHistory h = no_regret_run(vals, mech, grids, 300, 7);
    ASSERT_EQ(h.actions.size(), 300u);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(regret_of(h, i), regret_by_replay(vals, grids, h, i), 1e-9);
    }
    GameOracle game(vals, mech);
    EXPECT_NEAR(h.welfare[17], game.welfare(h.actions[17], grids), 1e-12);
  }
}

TEST(Learning, SameSeedSameHistory) {
  const auto vals = small_profile(9);
  const auto grids = default_grids(vals);
  const MechanismSpec mech{};
  const PlayHistory a = no_regret_run(vals, mech, grids, 200, 3);
  const PlayHistory b = no_regret_run(vals, mech, grids, 200, 3);
  EXPECT_EQ(a.actions, b.actions);
  EXPECT_EQ(a.welfare, b.welfare);
  std::ostringstream csv;
  write_history_csv(csv, a, grids);
  EXPECT_NE(csv.str().find('\n'), std::string::npos);
}

TEST(Learning, RegretShrinksWithRounds) {
  const auto vals = small_profile(2);
  const auto grids = default_grids(vals);
  const MechanismSpec mech{};
  const PlayHistory shortrun = no_regret_run(vals, mech, grids, 200, 1);
  const PlayHistory longrun = no_regret_run(vals, mech, grids, 5000, 1);
  Money a = 0.0;
  Money b = 0.0;
  for (int i = 0; i < 3; ++i) {
    a = std::max(a, regret_of(shortrun, i));
    b = std::max(b, regret_of(longrun, i));
  }
  EXPECT_LT(b, a);
}

TEST(Learning, EquilibriaPassTheAudit) {
  const auto vals = small_profile(5, 2, 3);
  const auto grids = default_grids(vals, {}, 1.6);
  const MechanismSpec mech{};
  const auto eqs = enumerate_pure_equilibria(vals, mech, grids);
  for (const ProfileIndex& p : eqs) EXPECT_TRUE(audit_profile(vals, mech, grids, p).is_equilibrium());
  const BestResponseResult br = best_response_dynamics(vals, mech, grids, zero_profile(mech, 2));
  if (br.converged) {
    EXPECT_TRUE(audit_profile(vals, mech, grids, br.profile).is_equilibrium());
    EXPECT_NE(std::find(eqs.begin(), eqs.end(), br.profile), eqs.end());
  }
  EXPECT_THROW(enumerate_pure_equilibria(vals, mech, grids, 1), CapacityError);
}

TEST(Learning, PoaEstimate) {
  const std::vector<Money> sw{1.0, 2.0, 4.0};
  const PoaEstimate e = poa_estimate(8.0, sw);
  EXPECT_DOUBLE_EQ(e.ratio_worst, 8.0);
  EXPECT_DOUBLE_EQ(e.ratio_best, 2.0);
  const std::vector<Money> zero{0.0};
  EXPECT_TRUE(std::isinf(poa_estimate(1.0, zero).ratio_worst));
  EXPECT_THROW(poa_estimate(1.0, {}), PreconditionError);
}

}  // namespace
}  // namespace sbalab
