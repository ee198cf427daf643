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

#ifndef SBALAB_ITEM_SET_HPP_
#define SBALAB_ITEM_SET_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace sbalab {

// Items are indices 0..m-1 with m <= kMaxItems.
inline constexpr int kMaxItems = 128;

// A subset of the goods, stored as a 128-bit membership vector.
//
// The total order (operator<=>) compares the sets as unsigned 128-bit
// integers with item 0 as the least significant bit. Every "lexicographically
// smallest" tie rule in the library refers to this order.
class ItemSet {
 public:
  constexpr ItemSet() = default;
  constexpr ItemSet(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {}
  ItemSet(std::initializer_list<int> items);

  static ItemSet of(const std::vector<int>& items);
  // {0, 1, ..., n-1}.
  static ItemSet range(int n);
  // {first, ..., first + count - 1}.
  static ItemSet interval(int first, int count);

  bool contains(int item) const {
    return item < 64 ? (lo_ >> item) & 1u : (hi_ >> (item - 64)) & 1u;
  }
  void insert(int item);
  void erase(int item);
  ItemSet with(int item) const {
    ItemSet s = *this;
    s.insert(item);
    return s;
  }
  ItemSet without(int item) const {
    ItemSet s = *this;
    s.erase(item);
    return s;
  }

  int count() const { return std::popcount(lo_) + std::popcount(hi_); }
  bool empty() const { return (lo_ | hi_) == 0; }
  // Index of the smallest member, or -1 for the empty set.
  int lowest() const;
  // Index of the largest member, or -1 for the empty set.
  int highest() const;

  bool subset_of(const ItemSet& o) const {
    return (lo_ & ~o.lo_) == 0 && (hi_ & ~o.hi_) == 0;
  }
  bool intersects(const ItemSet& o) const {
    return (lo_ & o.lo_) != 0 || (hi_ & o.hi_) != 0;
  }

  ItemSet operator|(const ItemSet& o) const { return ItemSet(lo_ | o.lo_, hi_ | o.hi_); }
  ItemSet operator&(const ItemSet& o) const { return ItemSet(lo_ & o.lo_, hi_ & o.hi_); }
  // Set difference.
  ItemSet operator-(const ItemSet& o) const { return ItemSet(lo_ & ~o.lo_, hi_ & ~o.hi_); }
  ItemSet& operator|=(const ItemSet& o) {
    lo_ |= o.lo_;
    hi_ |= o.hi_;
    return *this;
  }
  ItemSet& operator&=(const ItemSet& o) {
    lo_ &= o.lo_;
    hi_ &= o.hi_;
    return *this;
  }
  ItemSet& operator-=(const ItemSet& o) {
    lo_ &= ~o.lo_;
    hi_ &= ~o.hi_;
    return *this;
  }

  bool operator==(const ItemSet&) const = default;
  std::strong_ordering operator<=>(const ItemSet& o) const {
    if (auto c = hi_ <=> o.hi_; c != 0) return c;
    return lo_ <=> o.lo_;
  }

  std::vector<int> members() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t w = lo_; w != 0; w &= w - 1) f(std::countr_zero(w));
    for (std::uint64_t w = hi_; w != 0; w &= w - 1) f(64 + std::countr_zero(w));
  }

  // Packs the members of this set that are listed in `basis` into a local
  // bit mask: bit k is set iff basis[k] is a member.
  std::uint32_t compress(const std::vector<int>& basis) const;
  // Inverse of compress().
  static ItemSet expand(std::uint32_t mask, const std::vector<int>& basis);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::size_t hash() const;

  // "{0,3,5}"
  std::string to_string() const;

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
};

}  // namespace sbalab

template <>
struct std::hash<sbalab::ItemSet> {
  std::size_t operator()(const sbalab::ItemSet& s) const noexcept { return s.hash(); }
};

#endif  // SBALAB_ITEM_SET_HPP_
