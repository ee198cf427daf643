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

#include "sbalab/optimizer.hpp"

#include <gtest/gtest.h>

#include <random>

#include "sbalab/instances.hpp"
#include "support/oracles.hpp"

namespace sbalab {
namespace {

TEST(Optimizer, MatchesEnumeration) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 40; ++k) {
    const int n = 1 + k % 3;
    const int m = 1 + k % 7;
    std::vector<Valuation> vals;
    for (int i = 0; i < n; ++i) vals.push_back(random_mps_d(m, 2, 2, m, rng()));
    const OptimalAllocation par = optimal_allocation(vals);
    const OptimalAllocation ser = optimal_allocation_serial(vals);
    const Money want = oracle::brute_force_welfare(vals);
    EXPECT_NEAR(par.welfare, want, 1e-9);
    EXPECT_NEAR(ser.welfare, want, 1e-9);
    EXPECT_NEAR(social_welfare(vals, par.alloc), want, 1e-9);
  }
}

TEST(Optimizer, SocialWelfareRejectsOverlap) {
  const std::vector<Valuation> vals{Valuation(validate_hypergraph(2, {{ItemSet{0}, 1.0}})),
                                    Valuation(validate_hypergraph(2, {{ItemSet{0}, 1.0}}))};
  EXPECT_THROW(social_welfare(vals, {ItemSet{0}, ItemSet{0}}), DomainError);
  EXPECT_THROW(social_welfare(vals, {ItemSet{0}}), PreconditionError);
  EXPECT_DOUBLE_EQ(social_welfare(vals, {ItemSet{0}, ItemSet{1}}), 1.0);
}

TEST(Optimizer, CapacityGuard) {
  const std::vector<Valuation> vals{Valuation(validate_hypergraph(kOptimizerCap + 1, {}))};
  EXPECT_THROW(optimal_allocation(vals), CapacityError);
}

TEST(Optimizer, LopsidedDetection) {
  // one agent wants all four goods together, three others want one each
  std::vector<Valuation> vals{Valuation(validate_hypergraph(4, {{ItemSet{0, 1, 2, 3}, 10.0}}))};
  for (int j = 0; j < 3; ++j) vals.emplace_back(validate_hypergraph(4, {{ItemSet{j}, 1.0}}));
  const LopsidedReport r = lopsided_check(vals, 2);
  EXPECT_TRUE(r.lopsided);
  EXPECT_DOUBLE_EQ(r.opt, 10.0);
  EXPECT_DOUBLE_EQ(r.large_welfare, 10.0);
  EXPECT_EQ(r.large_agents, (std::vector<int>{0}));

  std::vector<Valuation> spread;
  for (int j = 0; j < 4; ++j) spread.emplace_back(validate_hypergraph(4, {{ItemSet{j}, 1.0}}));
  EXPECT_FALSE(lopsided_check(spread, 2).lopsided);
}

}  // namespace
}  // namespace sbalab
