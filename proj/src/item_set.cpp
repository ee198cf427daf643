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

#include "sbalab/errors.hpp"

namespace sbalab {

namespace {

void check_item(int item) {
  if (item < 0 || item >= kMaxItems) {
    throw DomainError("item index " + std::to_string(item) + " outside [0, " +
                      std::to_string(kMaxItems) + ")");
  }
}

}  // namespace

ItemSet::ItemSet(std::initializer_list<int> items) {
  for (int i : items) insert(i);
}

ItemSet ItemSet::of(const std::vector<int>& items) {
  ItemSet s;
  for (int i : items) s.insert(i);
  return s;
}

ItemSet ItemSet::range(int n) { return interval(0, n); }

ItemSet ItemSet::interval(int first, int count) {
  ItemSet s;
  for (int i = 0; i < count; ++i) s.insert(first + i);
  return s;
}

void ItemSet::insert(int item) {
  check_item(item);
  if (item < 64) {
    lo_ |= std::uint64_t{1} << item;
  } else {
    hi_ |= std::uint64_t{1} << (item - 64);
  }
}

void ItemSet::erase(int item) {
  check_item(item);
  if (item < 64) {
    lo_ &= ~(std::uint64_t{1} << item);
  } else {
    hi_ &= ~(std::uint64_t{1} << (item - 64));
  }
}

int ItemSet::lowest() const {
  if (lo_ != 0) return std::countr_zero(lo_);
  if (hi_ != 0) return 64 + std::countr_zero(hi_);
  return -1;
}

int ItemSet::highest() const {
  if (hi_ != 0) return 127 - std::countl_zero(hi_);
  if (lo_ != 0) return 63 - std::countl_zero(lo_);
  return -1;
}

std::vector<int> ItemSet::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count()));
  for_each([&](int i) { out.push_back(i); });
  return out;
}

std::uint32_t ItemSet::compress(const std::vector<int>& basis) const {
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (contains(basis[k])) mask |= std::uint32_t{1} << k;
  }
  return mask;
}

ItemSet ItemSet::expand(std::uint32_t mask, const std::vector<int>& basis) {
  ItemSet s;
  for (; mask != 0; mask &= mask - 1) {
    s.insert(basis[static_cast<std::size_t>(std::countr_zero(mask))]);
  }
  return s;
}

std::size_t ItemSet::hash() const {
  // splitmix-style mix of both words
  std::uint64_t h = lo_ * 0x9E3779B97F4A7C15ULL ^ (hi_ + 0x7F4A7C15ULL);
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  return static_cast<std::size_t>(h);
}

std::string ItemSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each([&](int i) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  });
  out += '}';
  return out;
}

}  // namespace sbalab
