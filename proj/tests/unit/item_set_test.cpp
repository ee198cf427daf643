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

#include "sbalab/item_set.hpp"

#include <gtest/gtest.h>

#include "sbalab/errors.hpp"

namespace sbalab {
namespace {

TEST(ItemSet, InitializerListMeansItemsNotWords) {
  const ItemSet s{1, 2};
  EXPECT_EQ(s.count(), 2);
  EXPECT_TRUE(s.contains(1));
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(s, ItemSet(0b110, 0));
}

TEST(ItemSet, HighWordMembers) {
  ItemSet s;
  s.insert(0);
  s.insert(64);
  s.insert(127);
  EXPECT_EQ(s.count(), 3);
  EXPECT_EQ(s.lowest(), 0);
  EXPECT_EQ(s.highest(), 127);
  EXPECT_EQ(s.members(), (std::vector<int>{0, 64, 127}));
  s.erase(64);
  EXPECT_FALSE(s.contains(64));
  EXPECT_EQ(s.to_string(), "{0,127}");
}

TEST(ItemSet, RangeAndInterval) {
  EXPECT_EQ(ItemSet::range(0).count(), 0);
  EXPECT_EQ(ItemSet::range(64).count(), 64);
  EXPECT_EQ(ItemSet::range(128).count(), 128);
  const ItemSet iv = ItemSet::interval(62, 4);
  EXPECT_EQ(iv.members(), (std::vector<int>{62, 63, 64, 65}));
  EXPECT_EQ(ItemSet().lowest(), -1);
}

TEST(ItemSet, SetAlgebra) {
  const ItemSet a{0, 1, 2, 70};
  const ItemSet b{2, 3, 70};
  EXPECT_EQ(a | b, (ItemSet{0, 1, 2, 3, 70}));
  EXPECT_EQ(a & b, (ItemSet{2, 70}));
  EXPECT_EQ(a - b, (ItemSet{0, 1}));
  EXPECT_TRUE((a & b).subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
  EXPECT_TRUE(a.intersects(b));
  EXPECT_FALSE((ItemSet{0}).intersects(ItemSet{1}));
}

TEST(ItemSet, CompressExpandRoundTrip) {
  const std::vector<int> basis{3, 9, 65, 100};
  const ItemSet s{9, 100, 5};
  const std::uint32_t mask = s.compress(basis);
  EXPECT_EQ(mask, 0b1010u);
  EXPECT_EQ(ItemSet::expand(mask, basis), (ItemSet{9, 100}));
}

TEST(ItemSet, OrderingAndHash) {
  EXPECT_LT(ItemSet{0}, ItemSet{1});
  EXPECT_LT(ItemSet{63}, ItemSet{64});
  EXPECT_EQ(std::hash<ItemSet>{}(ItemSet{4, 5}), std::hash<ItemSet>{}(ItemSet{5, 4}));
}

TEST(ItemSet, RejectsItemsOutsideTheUniverse) {
  ItemSet s;
  EXPECT_THROW(s.insert(-1), DomainError);
  EXPECT_THROW(s.insert(kMaxItems), DomainError);
}

}  // namespace
}  // namespace sbalab
