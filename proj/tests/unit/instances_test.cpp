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

#include <gtest/gtest.h>

#include "sbalab/hierarchy.hpp"
#include "sbalab/optimizer.hpp"
#include "sbalab/valuation_io.hpp"
#include "support/oracles.hpp"

namespace sbalab {
namespace {

TEST(Instances, StarShape) {
  const InstanceBundle b = star_instance(6, 0.01);
  ASSERT_EQ(b.vals.size(), 2u);
  EXPECT_EQ(b.vals[0].m(), 6);
  EXPECT_DOUBLE_EQ(b.vals[0].grand_value(), 5.0);
  EXPECT_DOUBLE_EQ(b.vals[1].value(ItemSet{0}), 5.0 / 6.0 + 0.01);
  EXPECT_NEAR(oracle::brute_force_welfare(b.vals), b.meta.expected_opt, 1e-12);
  EXPECT_EQ(b.meta.critical_bids.size(), 5u);
  EXPECT_DOUBLE_EQ(b.meta.param("m"), 6.0);
  EXPECT_THROW(b.meta.param("k"), PreconditionError);
  EXPECT_THROW(star_instance(1), ParameterError);
  EXPECT_THROW(star_instance(4, 0.0), ParameterError);
}

TEST(Instances, SmStarHasDependencyDegreeD) {
  const InstanceBundle b = sm_star_instance(4, 6, 0.01);
  EXPECT_EQ(supermodular_degree(b.vals[0]), 4);
  EXPECT_NEAR(oracle::brute_force_welfare(b.vals), 4.0, 1e-12);
  EXPECT_THROW(sm_star_instance(4, 4), ParameterError);
}

TEST(Instances, HybridLowerBound) {
  const InstanceBundle b = hybrid_lb_instance(3, 1e-3);
  EXPECT_EQ(b.vals.front().m(), 9);
  EXPECT_NEAR(oracle::brute_force_welfare(b.vals), 6.0, 1e-9);
  ASSERT_EQ(b.meta.profiles.size(), 2u);
  EXPECT_EQ(b.meta.profiles[0].branch, Branch::kSingleBid);
  EXPECT_EQ(b.meta.profiles[1].branch, Branch::kGrandBundle);
}

TEST(Instances, LayeredInstanceOptimum) {
  const InstanceBundle b = pos_layered_instance(4, 2);
  EXPECT_EQ(b.vals.front().m(), 85);
  EXPECT_DOUBLE_EQ(b.meta.expected_opt, 3.0 * 256.0);
  EXPECT_EQ(b.vals.size(), 13u);
  EXPECT_NEAR(b.vals[0].grand_value(), b.meta.expected_opt, 1e-6 * b.meta.expected_opt);
  EXPECT_THROW(pos_layered_instance(5, 2), ParameterError);
  EXPECT_THROW(pos_layered_instance(4, 1), ParameterError);
}

TEST(Instances, TightPartitionValues) {
  const InstanceBundle b = tight_partition_instance(3, 2, 1e-6);
  EXPECT_EQ(b.vals.front().m(), 20);
  EXPECT_NEAR(b.vals.front().grand_value(), b.meta.expected_opt, 1e-12);
  Money blocks = 0.0;
  for (const ItemSet& q : b.meta.expected_blocks) blocks += b.vals.front().value(q);
  EXPECT_NEAR(blocks, b.meta.expected_eq_sw, 1e-12);
  EXPECT_NEAR(b.meta.expected_ratio, 3.0, 1e-5);
  EXPECT_THROW(tight_partition_instance(3, 2, 0.6), ParameterError);
}

TEST(Instances, CompleteHypergraph) {
  const InstanceBundle b = complete_hypergraph_instance(3, 2);
  EXPECT_EQ(b.vals.front().m(), 4);
  EXPECT_DOUBLE_EQ(b.vals.front().grand_value(), 6.0);
  EXPECT_DOUBLE_EQ(b.meta.expected_ratio, 3.0);
  EXPECT_DOUBLE_EQ(complete_hypergraph_instance(5, 3).meta.expected_ratio, 10.0);
}

TEST(Instances, RandomGeneratorsRespectTheirClasses) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int d = 1 + static_cast<int>(seed % 4);
    const HypergraphValuation ps = random_ps_d(10, d, 15, seed);
    EXPECT_TRUE(in_ps_d(Valuation(ps), d));
    EXPECT_LE(ph_rank(ps), d + 1);
    const HypergraphValuation ph2 = random_ph2_sm_d(10, d, 20, seed);
    EXPECT_LE(ph_rank(ph2), 2);
    EXPECT_TRUE(in_ps_d(Valuation(ph2), d));
    const Valuation mps = random_mps_d(8, d, 3, 8, seed);
    EXPECT_TRUE(in_ps_d(mps, d));
    EXPECT_TRUE(is_d_ch(random_block_uniform(9, d, seed), d).has_value());
    const StructureReport s = check_structure(random_general(6, seed));
    EXPECT_TRUE(s.monotone);
  }
}

TEST(Instances, GeneratorsAreDeterministic) {
  EXPECT_EQ(profile_to_json(std::vector<Valuation>{random_mps_d(8, 2, 2, 8, 4)}),
            profile_to_json(std::vector<Valuation>{random_mps_d(8, 2, 2, 8, 4)}));
  EXPECT_NE(profile_to_json(std::vector<Valuation>{random_mps_d(8, 2, 2, 8, 4)}),
            profile_to_json(std::vector<Valuation>{random_mps_d(8, 2, 2, 8, 5)}));
}

TEST(Instances, GraphPropertyReportCounts) {
  const RandomGraph g = random_graph_valuation(36, 1.0 / 12.0, 3);
  EXPECT_EQ(g.report.d, 6);
  EXPECT_EQ(g.report.edges, static_cast<int>(g.valuation.edges().size()));
  int max_degree = 0;
  for (int j = 0; j < 36; ++j) {
    int deg = 0;
    for (const Hyperedge& e : g.valuation.edges()) deg += e.members.contains(j);
    max_degree = std::max(max_degree, deg);
  }
  EXPECT_EQ(g.report.max_degree, max_degree);
  EXPECT_EQ(g.report.degree_bounded, max_degree <= 6);
  EXPECT_EQ(g.report.enough_edges, g.report.edges >= 216.0 / 9.0);
}

TEST(Instances, MetaRoundTrip) {
  const InstanceBundle b = hybrid_lb_instance(3, 1e-3);
  const InstanceMeta back = meta_from_json(meta_to_json(b.meta));
  EXPECT_EQ(back.name, b.meta.name);
  EXPECT_EQ(back.tie.order, b.meta.tie.order);
  EXPECT_EQ(back.critical_bids, b.meta.critical_bids);
  ASSERT_EQ(back.profiles.size(), b.meta.profiles.size());
  EXPECT_EQ(back.profiles[1].bids, b.meta.profiles[1].bids);
  EXPECT_EQ(meta_to_json(back), meta_to_json(b.meta));
}

}  // namespace
}  // namespace sbalab
