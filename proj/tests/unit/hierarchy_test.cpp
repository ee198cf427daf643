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

#include <gtest/gtest.h>

#include <map>

#include "sbalab/instances.hpp"
#include "support/oracles.hpp"

namespace sbalab {
namespace {

TEST(Hierarchy, HarmonicConvention) {
  EXPECT_DOUBLE_EQ(harmonic(0.0), 0.0);
  EXPECT_DOUBLE_EQ(harmonic(1.0), 1.0);
  EXPECT_DOUBLE_EQ(harmonic(3.0), 1.0 + 0.5 + 1.0 / 3.0);
  // non-integers round down and add one
  EXPECT_DOUBLE_EQ(harmonic(2.5), 1.0 + 0.5 + 1.0);
  EXPECT_DOUBLE_EQ(harmonic(0.5), 1.0);
  EXPECT_THROW(harmonic(-1.0), DomainError);
}

TEST(Hierarchy, DependencySetsOfAStar) {
  // centre 0 joined to 1, 2, 3
  const Valuation v(validate_hypergraph(
      4, {{ItemSet{0, 1}, 1.0}, {ItemSet{0, 2}, 1.0}, {ItemSet{0, 3}, 1.0}}));
  for (DepMethod m : {DepMethod::kBruteForce, DepMethod::kEdgeRule}) {
    EXPECT_EQ(dep_plus(v, 0, m), (ItemSet{1, 2, 3}));
    EXPECT_EQ(dep_plus(v, 2, m), ItemSet{0});
    EXPECT_EQ(supermodular_degree(v, m), 3);
  }
  EXPECT_TRUE(in_ps_d(v, 3));
  EXPECT_FALSE(in_ps_d(v, 2));
  EXPECT_EQ(ph_rank(v.hypergraph()), 2);
}

TEST(Hierarchy, ZeroWeightEdgesCreateNoDependency) {
  const Valuation v(validate_hypergraph(3, {{ItemSet{0, 1}, 0.0}, {ItemSet{2}, 1.0}}));
  EXPECT_TRUE(dep_plus(v, 0, DepMethod::kBruteForce).empty());
  EXPECT_TRUE(dep_plus(v, 0, DepMethod::kEdgeRule).empty());
}

TEST(Hierarchy, EdgeRuleNeedsOneHypergraph) {
  const Valuation v = random_mps_d(5, 2, 2, 5, 1);
  EXPECT_THROW(dep_plus(v, 0, DepMethod::kEdgeRule), PreconditionError);
}

TEST(Hierarchy, MobiusRecoversEdges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const HypergraphValuation h = random_ps_d(7, 3, 8, seed);
    std::map<ItemSet, Money> want;
    for (const Hyperedge& e : h.edges()) {
      if (e.weight != 0.0) want[e.members] += e.weight;
    }
    std::map<ItemSet, Money> got;
    for (const Hyperedge& e : mobius_edges(Valuation(h))) {
      if (std::abs(e.weight) > 1e-12) got[e.members] = e.weight;
    }
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [s, w] : want) EXPECT_NEAR(got[s], w, 1e-9);
  }
}

TEST(Hierarchy, MobiusOfAMaxHasNegativeTerms) {
  const HypergraphValuation a = validate_hypergraph(2, {{ItemSet{0}, 1.0}});
  const HypergraphValuation b = validate_hypergraph(2, {{ItemSet{1}, 1.0}});
  const Valuation v(MaxValuation({a, b}));
  Money pair = 0.0;
  for (const Hyperedge& e : mobius_edges(v)) {
    if (e.members == ItemSet{0, 1}) pair = e.weight;
  }
  EXPECT_DOUBLE_EQ(pair, -1.0);
}

TEST(Hierarchy, BlockUniformRecognition) {
  const HypergraphValuation h =
      validate_hypergraph(5, {{ItemSet{0, 1}, 2.0}, {ItemSet{2, 3, 4}, 3.0}});
  const auto w = is_d_ch(h, 3);
  ASSERT_TRUE(w.has_value());
  EXPECT_DOUBLE_EQ(w->unit_value, 1.0);
  EXPECT_FALSE(is_d_ch(h, 2).has_value());
  const HypergraphValuation uneven = validate_hypergraph(4, {{ItemSet{0, 1}, 2.0}, {ItemSet{2, 3}, 3.0}});
  EXPECT_FALSE(is_d_ch(uneven, 4).has_value());
  const HypergraphValuation overlap = validate_hypergraph(3, {{ItemSet{0, 1}, 2.0}, {ItemSet{1, 2}, 2.0}});
  EXPECT_FALSE(is_d_ch(overlap, 3).has_value());
  // the witness rebuilds the same function
  const HypergraphValuation back = from_witness(5, *w);
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    EXPECT_DOUBLE_EQ(back.value(ItemSet(mask, 0)), h.value(ItemSet(mask, 0)));
  }
}

TEST(Hierarchy, GeneratedBlockUniformIsRecognized) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const HypergraphValuation h = random_block_uniform(8, 3, seed);
    EXPECT_TRUE(is_d_ch(h, 3).has_value());
    EXPECT_TRUE(is_d_ch(Valuation(MaxValuation({h})), 3).has_value());
  }
}

TEST(Hierarchy, ClassifyLabels) {
  const Valuation v(validate_hypergraph(
      4, {{ItemSet{0, 1}, 1.0}, {ItemSet{0, 2}, 1.0}, {ItemSet{0, 1, 3}, 1.0}}));
  const ClassLabel c = classify(v);
  EXPECT_EQ(c.m, 4);
  EXPECT_EQ(c.parts, 1);
  EXPECT_EQ(c.ph_rank, 3);
  EXPECT_EQ(c.sm_degree, 3);
  EXPECT_EQ(c.part_sm_degrees, (std::vector<int>{3}));
  EXPECT_EQ(c.min_ch_block, -1);
  const ClassLabel block = classify(Valuation(validate_hypergraph(4, {{ItemSet{0, 1}, 1.0}, {ItemSet{2, 3}, 1.0}})));
  EXPECT_EQ(block.min_ch_block, 2);
}

TEST(Hierarchy, GeneratedPsDStaysInClass) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 1 + static_cast<int>(seed % 3);
    const Valuation v(random_ps_d(9, d, 12, seed));
    EXPECT_TRUE(in_ps_d(v, d));
    EXPECT_LE(supermodular_degree(v, DepMethod::kBruteForce), d);
  }
}

}  // namespace
}  // namespace sbalab
