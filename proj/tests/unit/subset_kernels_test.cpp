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

#include "sbalab/subset_kernels.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sbalab {
namespace {

LocalSetFunction random_function(int c, std::uint64_t seed, int parts = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::vector<std::vector<LocalEdge>> out(static_cast<std::size_t>(parts));
  for (auto& part : out) {
    for (int e = 0; e < 2 * c; ++e) {
      std::uint32_t mask = 0;
      const int size = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < size; ++k) mask |= 1u << (rng() % static_cast<unsigned>(c));
      part.push_back({mask, w(rng)});
    }
  }
  return LocalSetFunction(std::move(out));
}

// Plain loop over all subsets; no kernel involved.
SubsetChoice demand_by_loop(const LocalSetFunction& f, int c, double price, DemandTie tie) {
  SubsetChoice best{0, f(0)};
  for (std::uint32_t s = 1; s < (1u << c); ++s) {
    const double u = f(s) - price * std::popcount(s);
    const int size = std::popcount(s);
    const int best_size = std::popcount(best.mask);
    const bool tied = std::abs(u - best.score) <= kMoneyTol;
    if (u > best.score + kMoneyTol ||
        (tied && (tie == DemandTie::kFewestItems ? size < best_size : size > best_size))) {
      best = {s, u};
    }
  }
  return best;
}

class KernelAgreement : public ::testing::TestWithParam<int> {};

TEST_P(KernelAgreement, ParallelMatchesSerialAndLoop) {
  const int c = GetParam();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LocalSetFunction f = random_function(c, seed);
    for (double price : {0.0, 0.2, 0.7}) {
      for (DemandTie tie : {DemandTie::kFewestItems, DemandTie::kMostItems}) {
        const SubsetChoice par = argmax_demand(f, c, price, tie);
        const SubsetChoice ser = argmax_demand_serial(f, c, price, tie);
        const SubsetChoice loop = demand_by_loop(f, c, price, tie);
        EXPECT_EQ(par.mask, ser.mask);
        EXPECT_NEAR(par.score, loop.score, 1e-12);
        EXPECT_EQ(std::popcount(par.mask), std::popcount(loop.mask));
      }
    }
    EXPECT_EQ(value_table(f, c), value_table_serial(f, c));
    for (int k = 0; k <= c; k += 2) {
      EXPECT_EQ(argmax_fixed_size(f, c, k).mask, argmax_fixed_size_serial(f, c, k).mask);
    }
    const LocalSetFunction g = random_function(c, seed + 100, 1);
    const SubsetChoice ex = max_excess(f, g, c);
    const SubsetChoice ex_serial = max_excess_serial(f, g, c);
    EXPECT_EQ(ex.mask, ex_serial.mask);
    EXPECT_NEAR(ex.score, f(ex.mask) - g(ex.mask), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelAgreement, ::testing::Values(1, 4, 9, 13));

TEST(SubsetKernels, FixedSizeIsBestOfThatSize) {
  const int c = 8;
  const LocalSetFunction f = random_function(c, 3);
  for (int k = 0; k <= c; ++k) {
    const SubsetChoice s = argmax_fixed_size(f, c, k);
    EXPECT_EQ(std::popcount(s.mask), k);
    for (std::uint32_t t = 0; t < (1u << c); ++t) {
      if (std::popcount(t) == k) EXPECT_LE(f(t), s.score + 1e-12);
    }
  }
  EXPECT_THROW(argmax_fixed_size(f, c, c + 1), PreconditionError);
}

TEST(SubsetKernels, EmptySetWinsAtHighPrice) {
  const LocalSetFunction f = random_function(6, 1);
  const SubsetChoice s = argmax_demand(f, 6, 1e6, DemandTie::kMostItems);
  EXPECT_EQ(s.mask, 0u);
  EXPECT_EQ(s.score, 0.0);
}

TEST(SubsetKernels, CapacityGuard) {
  const LocalSetFunction f = random_function(4, 1);
  EXPECT_THROW(argmax_demand(f, kMaxLocalItems + 1, 0.1, DemandTie::kFewestItems), CapacityError);
}

TEST(SubsetKernels, AllocationLayerMatchesSerial) {
  const int m = 7;
  const auto prev = value_table(random_function(m, 5), m);
  const auto agent = value_table(random_function(m, 6), m);
  std::vector<double> a(prev.size()), b(prev.size());
  std::vector<std::uint32_t> ca(prev.size()), cb(prev.size());
  allocation_layer(prev, agent, m, a, ca);
  allocation_layer_serial(prev, agent, m, b, cb);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ca, cb);
  // next[s] = max over t subset of s of prev[s - t] + agent[t]
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    double best = 0.0;
    for (std::uint32_t t = s;; t = (t - 1) & s) {
      best = std::max(best, prev[s & ~t] + agent[t]);
      if (t == 0) break;
    }
    EXPECT_NEAR(a[s], best, 1e-12);
  }
}

TEST(SubsetKernels, StructureScanFindsViolations) {
  // table over 2 items: {} 0, {0} 1, {1} 1, {0,1} 3 is monotone, not subadditive
  const std::vector<double> table{0.0, 1.0, 1.0, 3.0};
  const StructureScan s = scan_structure(table, 2);
  EXPECT_TRUE(s.monotone);
  EXPECT_FALSE(s.subadditive);
  const std::vector<double> dip{0.0, 2.0, 1.0, 1.5};
  const StructureScan d = scan_structure_serial(dip, 2);
  EXPECT_FALSE(d.monotone);
  EXPECT_EQ(scan_structure(dip, 2).monotone, d.monotone);
}

}  // namespace
}  // namespace sbalab
