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

#include "sbalab/smoothness.hpp"

#include <gtest/gtest.h>

#include <random>

#include "sbalab/instances.hpp"
#include "support/oracles.hpp"

namespace sbalab {
namespace {

TEST(Smoothness, DistributionShapes) {
  const DeviationDistribution g = make_deviation(DeviationFamily::kGrandBundle, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(g.scale, 1.0);
  EXPECT_NEAR(g.hi, 2.0 * (1.0 - std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(g.mass(), 1.0, 1e-12);
  EXPECT_NEAR(g.residual, 0.0, 1e-12);
  const DeviationDistribution b = make_deviation(DeviationFamily::kBlockUniform, 3, 1.0);
  EXPECT_DOUBLE_EQ(b.scale, 1.0 / 3.0);
  EXPECT_NEAR(b.hi, 1.0 - std::exp(-3.0), 1e-15);
  EXPECT_NEAR(b.mass(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(b.density(-0.1), 0.0);
  EXPECT_DOUBLE_EQ(b.density(b.hi + 0.1), 0.0);
}

TEST(Smoothness, ShrunkSupportLeavesMassAtZero) {
  const double c = 0.5;
  const DeviationDistribution d =
      make_deviation(DeviationFamily::kSingleBid, c, 1.0, SupportConvention::kShrunk);
  EXPECT_NEAR(d.hi, c * (1.0 - std::exp(-1.0 / c)), 1e-15);
  EXPECT_GT(d.residual, 0.0);
  EXPECT_NEAR(d.residual + d.mass(), 1.0, 1e-12);
  EXPECT_THROW(make_deviation(DeviationFamily::kSingleBid, 2.0, 1.0, SupportConvention::kShrunk),
               DomainError);
  const DeviationDistribution n = make_deviation(DeviationFamily::kSingleBid, c, 1.0);
  EXPECT_NEAR(n.mass(), 1.0, 1e-12);
  EXPECT_THROW(make_deviation(DeviationFamily::kGrandBundle, 1.0, 0.0), DomainError);
}

TEST(Smoothness, SamplerFollowsTheDensity) {
  const DeviationDistribution d =
      make_deviation(DeviationFamily::kSingleBid, 0.5, 1.0, SupportConvention::kShrunk);
  const auto id = [](double t) { return t; };
  const double mc = oracle::monte_carlo_expectation(d, id, 200000, 5);
  const double quad = oracle::quadrature_expectation(d, id, {});
  EXPECT_NEAR(mc, quad, 3e-3);
  std::mt19937_64 rng(1);
  int zeros = 0;
  for (int k = 0; k < 20000; ++k) {
    const double t = d.sample(rng);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, d.hi);
    zeros += t == 0.0;
  }
  EXPECT_NEAR(zeros / 20000.0, d.residual, 0.015);
}

TEST(Smoothness, ClosedFormBoundsByHand) {
  const DeviationDistribution d = make_deviation(DeviationFamily::kBlockUniform, 2, 1.0);
  const std::vector<Money> prices{0.1, 0.3, 0.0, 2.0};
  const std::vector<ItemSet> blocks{ItemSet{0, 1}, ItemSet{2}, ItemSet{3}};
  const double want = d.scale * (2 * (d.hi - 0.3) + 1 * (d.hi - 0.0) + 0.0);
  EXPECT_NEAR(block_deviation_bound(d, blocks, prices), want, 1e-15);
  const DeviationDistribution g = make_deviation(DeviationFamily::kGrandBundle, 1.0, 5.0);
  EXPECT_NEAR(grand_deviation_bound(g, prices), g.hi - 2.0, 1e-15);
  EXPECT_NEAR(bundle_deviation_bound(d, ItemSet{0, 1}, prices), d.scale * 2 * (d.hi - 0.3), 1e-15);
}

// exact expectation against adaptive quadrature over the oracle auctions
TEST(Smoothness, ExactUtilityMatchesQuadrature) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const int m = 2 + k % 4;
    std::vector<Valuation> vals;
    for (int i = 0; i < 3; ++i) vals.push_back(random_mps_d(m, 2, 2, m, rng()));
    std::vector<Money> bids(3);
    for (Money& b : bids) b = unit(rng) * 0.6;
    const int agent = k % 3;
    const Valuation& me = vals[static_cast<std::size_t>(agent)];
    if (me.grand_value() <= 0.0) continue;
    const Branch branch = k % 2 == 0 ? Branch::kSingleBid : Branch::kGrandBundle;
    const DeviationDistribution dist =
        k % 4 < 2 ? make_deviation(DeviationFamily::kGrandBundle, 1.0, me.grand_value())
                  : make_deviation(DeviationFamily::kSingleBid, 0.5, me.grand_value() / m,
                                   SupportConvention::kShrunk);
    const auto f = [&](double t) {
      std::vector<Money> b = bids;
      b[static_cast<std::size_t>(agent)] = t;
      const auto u = branch == Branch::kSingleBid ? oracle::brute_single_bid_utilities(vals, b, {})
                                                  : oracle::brute_grand_bundle_utilities(vals, b);
      return u[static_cast<std::size_t>(agent)];
    };
    std::vector<double> jumps(bids.begin(), bids.end());
    jumps.push_back(me.grand_value());
    const double quad = oracle::quadrature_expectation(dist, f, jumps);
    EXPECT_NEAR(exact_deviation_utility(vals, bids, {}, agent, branch, dist), quad, 1e-6);
  }
}

TEST(Smoothness, SamplerCornersComeFirst) {
  const std::vector<Valuation> vals{random_general(4, 1), random_general(4, 2)};
  ProfileSampler s(3);
  const auto draws = s.draw(vals, 6);
  ASSERT_EQ(draws.size(), 6u);
  EXPECT_EQ(draws[0].sb, (std::vector<Money>{0.0, 0.0}));
  EXPECT_GT(draws[1].sb[0], vals[0].grand_value());
  EXPECT_GT(draws[2].sb[0], 0.0);
  EXPECT_DOUBLE_EQ(draws[2].sb[1], 0.0);
}

TEST(Smoothness, SuitesHoldOnRandomProfiles) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 30; ++k) {
    const int m = 2 + k % 5;
    std::vector<Valuation> block;
    std::vector<Valuation> mixed;
    for (int i = 0; i < 3; ++i) {
      block.emplace_back(random_block_uniform(m, 2, rng()));
      mixed.push_back(random_mps_d(m, 2, 2, m, rng()));
    }
    ProfileSampler sampler(rng());
    SmoothnessOptions opts;
    opts.d = 2;
    const auto bids = sampler.draw(block, 6);
    const SmoothnessReport r = smoothness_check(SmoothnessSuite::kBlockUniform, block, bids, opts);
    EXPECT_TRUE(r.applicable);
    EXPECT_TRUE(r.pass) << "min margin " << r.min_margin;
    const auto mb = sampler.draw(mixed, 6);
    for (SmoothnessSuite s : {SmoothnessSuite::kGrandDominant, SmoothnessSuite::kSmallBundles,
                              SmoothnessSuite::kGeneralSingleBid, SmoothnessSuite::kLopsidedGrand,
                              SmoothnessSuite::kSpreadSingleBid}) {
      const SmoothnessReport rep = smoothness_check(s, mixed, mb);
      if (rep.applicable) EXPECT_TRUE(rep.pass) << suite_name(s) << " " << rep.min_margin;
    }
    EXPECT_TRUE(hybrid_smoothness_check(mixed, mb).pass);
  }
}

TEST(Smoothness, BlockSuiteRejectsOtherClasses) {
  const std::vector<Valuation> vals{
      Valuation(validate_hypergraph(3, {{ItemSet{0, 1}, 1.0}, {ItemSet{1, 2}, 1.0}}))};
  ProfileSampler s(1);
  SmoothnessOptions opts;
  opts.d = 3;
  EXPECT_FALSE(smoothness_check(SmoothnessSuite::kBlockUniform, vals, s.draw(vals, 3), opts).applicable);
}

TEST(Smoothness, OverstatedLambdaIsCaught) {
  const std::vector<Valuation> vals{Valuation(validate_hypergraph(2, {{ItemSet{0, 1}, 1.0}}))};
  const std::vector<BidSample> zero{{{0.0}, {0.0}}};
  SmoothnessOptions opts;
  opts.lambda = 2.0;
  const SmoothnessReport r = smoothness_check(SmoothnessSuite::kGrandDominant, vals, zero, opts);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.failing_profile, 0);
}

TEST(Smoothness, MergeKeepsWorstMargin) {
  SmoothnessReport a;
  a.lambda = 0.5;
  a.mu = 1.0;
  a.profiles.push_back({1.0, 1.0, 0.5, 0.5});
  SmoothnessReport b;
  b.lambda = 0.25;
  b.mu = 2.0;
  b.profiles.push_back({1.0, 1.0, 0.9, 0.1});
  SmoothnessReport skip;
  skip.applicable = false;
  const std::vector<SmoothnessReport> all{a, b, skip};
  const SmoothnessReport m = merge_reports(all);
  EXPECT_DOUBLE_EQ(m.min_margin, 0.1);
  EXPECT_DOUBLE_EQ(m.lambda, 0.25);
  EXPECT_DOUBLE_EQ(m.implied_poa(), 8.0);
  EXPECT_EQ(m.profiles.size(), 2u);
}

}  // namespace
}  // namespace sbalab
