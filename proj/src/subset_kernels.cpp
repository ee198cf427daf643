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

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace sbalab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_width(int c) {
  if (c < 0 || c > kMaxLocalItems) {
    throw CapacityError("exhaustive subset enumeration over " + std::to_string(c) +
                        " items exceeds the cap of " + std::to_string(kMaxLocalItems));
  }
}

double demand_utility(const LocalSetFunction& f, std::uint32_t mask, Money price) {
  const int k = std::popcount(mask);
  if (k == 0) return f(0);
  return f(mask) - static_cast<double>(k) * price;
}

// Tie key: smaller is preferred.
std::int64_t tie_key(std::uint32_t mask, DemandTie tie) {
  const std::int64_t k = std::popcount(mask);
  const std::int64_t card = tie == DemandTie::kFewestItems ? k : 64 - k;
  return (card << 32) | static_cast<std::int64_t>(mask);
}

// All masks over c bits with exactly k bits set, in increasing order.
std::vector<std::uint32_t> combinations(int c, int k) {
  std::vector<std::uint32_t> out;
  if (k < 0 || k > c) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint64_t limit = std::uint64_t{1} << c;
  std::uint64_t x = (std::uint64_t{1} << k) - 1;
  while (x < limit) {
    out.push_back(static_cast<std::uint32_t>(x));
    const std::uint64_t u = x & (~x + 1);
    const std::uint64_t v = x + u;
    x = v + (((v ^ x) / u) >> 2);
  }
  return out;
}

}  // namespace

SubsetChoice argmax_demand_serial(const LocalSetFunction& f, int c, Money price,
                                  DemandTie tie) {
  check_width(c);
  const std::uint32_t n = std::uint32_t{1} << c;
  double best = kNegInf;
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    best = std::max(best, demand_utility(f, mask, price));
  }
  SubsetChoice choice{0, demand_utility(f, 0, price)};
  std::int64_t best_key = std::numeric_limits<std::int64_t>::max();
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    const double u = demand_utility(f, mask, price);
    if (u < best - kMoneyTol) continue;
    const std::int64_t key = tie_key(mask, tie);
    if (key < best_key) {
      best_key = key;
      choice = {mask, u};
    }
  }
  return choice;
}

SubsetChoice argmax_demand(const LocalSetFunction& f, int c, Money price, DemandTie tie) {
  check_width(c);
  const std::int64_t n = std::int64_t{1} << c;
  if (n < 4096) return argmax_demand_serial(f, c, price, tie);
  double best = kNegInf;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::int64_t mask = 0; mask < n; ++mask) {
    best = std::max(best, demand_utility(f, static_cast<std::uint32_t>(mask), price));
  }
  std::int64_t best_key = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for reduction(min : best_key) schedule(static)
  for (std::int64_t mask = 0; mask < n; ++mask) {
    const auto m32 = static_cast<std::uint32_t>(mask);
    if (demand_utility(f, m32, price) < best - kMoneyTol) continue;
    best_key = std::min(best_key, tie_key(m32, tie));
  }
  const auto mask = static_cast<std::uint32_t>(best_key & 0xFFFFFFFFLL);
  return {mask, demand_utility(f, mask, price)};
}

SubsetChoice argmax_fixed_size_serial(const LocalSetFunction& f, int c, int k) {
  check_width(c);
  const std::vector<std::uint32_t> masks = combinations(c, k);
  if (masks.empty()) throw PreconditionError("fixed-size subset larger than ground set");
  double best = kNegInf;
  for (std::uint32_t mask : masks) best = std::max(best, f(mask));
  for (std::uint32_t mask : masks) {
    const double value = f(mask);
    if (value >= best - kMoneyTol) return {mask, value};
  }
  return {};  // unreachable
}

SubsetChoice argmax_fixed_size(const LocalSetFunction& f, int c, int k) {
  check_width(c);
  const std::vector<std::uint32_t> masks = combinations(c, k);
  if (masks.empty()) throw PreconditionError("fixed-size subset larger than ground set");
  const auto n = static_cast<std::int64_t>(masks.size());
  if (n < 2048) return argmax_fixed_size_serial(f, c, k);
  std::vector<double> values(masks.size());
  double best = kNegInf;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = f(masks[static_cast<std::size_t>(i)]);
    best = std::max(best, values[static_cast<std::size_t>(i)]);
  }
  // masks are increasing, so the first index within tolerance is the smallest mask
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (values[idx] >= best - kMoneyTol) return {masks[idx], values[idx]};
  }
  return {};
}

std::vector<double> value_table_serial(const LocalSetFunction& f, int c) {
  check_width(c);
  std::vector<double> table(std::size_t{1} << c);
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    table[mask] = f(static_cast<std::uint32_t>(mask));
  }
  return table;
}

std::vector<double> value_table(const LocalSetFunction& f, int c) {
  check_width(c);
  std::vector<double> table(std::size_t{1} << c);
  const auto n = static_cast<std::int64_t>(table.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t mask = 0; mask < n; ++mask) {
    table[static_cast<std::size_t>(mask)] = f(static_cast<std::uint32_t>(mask));
  }
  return table;
}

namespace {

inline void layer_cell(std::span<const double> prev, std::span<const double> agent,
                       std::uint32_t s, std::span<double> next,
                       std::span<std::uint32_t> choice) {
  double best = prev[s] + agent[0];
  std::uint32_t arg = 0;
  // nonempty submasks of s in increasing order
  for (std::uint32_t t = (0u - s) & s; t != 0; t = (t - s) & s) {
    const double cand = prev[s ^ t] + agent[t];
    if (cand > best) {
      best = cand;
      arg = t;
    }
  }
  next[s] = best;
  choice[s] = arg;
}

}  // namespace

void allocation_layer_serial(std::span<const double> prev,
                             std::span<const double> agent, int m,
                             std::span<double> next, std::span<std::uint32_t> choice) {
  const std::uint32_t n = std::uint32_t{1} << m;
  for (std::uint32_t s = 0; s < n; ++s) layer_cell(prev, agent, s, next, choice);
}

void allocation_layer(std::span<const double> prev, std::span<const double> agent,
                      int m, std::span<double> next, std::span<std::uint32_t> choice) {
  const std::int64_t n = std::int64_t{1} << m;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t s = 0; s < n; ++s) {
    layer_cell(prev, agent, static_cast<std::uint32_t>(s), next, choice);
  }
}

namespace {

// Returns the smallest violating sub-item for monotonicity, or -1.
inline int monotone_violation(std::span<const double> table, std::uint32_t u) {
  for (std::uint32_t w = u; w != 0; w &= w - 1) {
    const std::uint32_t sub = u ^ (w & (0u - w));
    if (table[sub] > table[u] + kMoneyTol) return static_cast<int>(sub);
  }
  return -1;
}

// Returns the smallest nonempty proper submask a of u with
// table[u] > table[a] + table[u ^ a], or 0.
inline std::uint32_t subadditive_violation(std::span<const double> table,
                                           std::uint32_t u) {
  for (std::uint32_t a = (0u - u) & u; a != 0 && a != u; a = (a - u) & u) {
    if (table[u] > table[a] + table[u ^ a] + kMoneyTol) return a;
  }
  return 0;
}

constexpr std::int64_t kNoViolation = std::numeric_limits<std::int64_t>::max();

StructureScan finish_scan(std::span<const double> table, std::int64_t mono_u,
                          std::int64_t sub_u) {
  StructureScan scan;
  if (mono_u != kNoViolation) {
    scan.monotone = false;
    scan.monotone_super = static_cast<std::uint32_t>(mono_u);
    scan.monotone_sub =
        static_cast<std::uint32_t>(monotone_violation(table, scan.monotone_super));
  }
  if (sub_u != kNoViolation) {
    scan.subadditive = false;
    const auto u = static_cast<std::uint32_t>(sub_u);
    scan.subadditive_a = subadditive_violation(table, u);
    scan.subadditive_b = u ^ scan.subadditive_a;
  }
  return scan;
}

void check_table(std::span<const double> table, int m) {
  check_width(m);
  if (table.size() != (std::size_t{1} << m)) {
    throw PreconditionError("value table size does not match 2^m");
  }
}

}  // namespace

StructureScan scan_structure_serial(std::span<const double> table, int m) {
  check_table(table, m);
  std::int64_t mono_u = kNoViolation;
  std::int64_t sub_u = kNoViolation;
  const std::uint32_t n = std::uint32_t{1} << m;
  for (std::uint32_t u = 0; u < n; ++u) {
    if (mono_u == kNoViolation && monotone_violation(table, u) >= 0) mono_u = u;
    if (sub_u == kNoViolation && subadditive_violation(table, u) != 0) sub_u = u;
  }
  return finish_scan(table, mono_u, sub_u);
}

StructureScan scan_structure(std::span<const double> table, int m) {
  check_table(table, m);
  std::int64_t mono_u = kNoViolation;
  std::int64_t sub_u = kNoViolation;
  const std::int64_t n = std::int64_t{1} << m;
#pragma omp parallel for reduction(min : mono_u, sub_u) schedule(dynamic, 256)
  for (std::int64_t u = 0; u < n; ++u) {
    const auto u32 = static_cast<std::uint32_t>(u);
    if (u < mono_u && monotone_violation(table, u32) >= 0) mono_u = u;
    if (u < sub_u && subadditive_violation(table, u32) != 0) sub_u = u;
  }
  return finish_scan(table, mono_u, sub_u);
}

SubsetChoice max_excess_serial(const LocalSetFunction& upper,
                               const LocalSetFunction& lower, int c) {
  check_width(c);
  const std::uint32_t n = std::uint32_t{1} << c;
  SubsetChoice best{0, upper(0) - lower(0)};
  for (std::uint32_t mask = 1; mask < n; ++mask) {
    const double excess = upper(mask) - lower(mask);
    if (excess > best.score) best = {mask, excess};
  }
  return best;
}

SubsetChoice max_excess(const LocalSetFunction& upper, const LocalSetFunction& lower,
                        int c) {
  check_width(c);
  const std::int64_t n = std::int64_t{1} << c;
  if (n < 4096) return max_excess_serial(upper, lower, c);
  double best = kNegInf;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::int64_t mask = 0; mask < n; ++mask) {
    const auto m32 = static_cast<std::uint32_t>(mask);
    best = std::max(best, upper(m32) - lower(m32));
  }
  std::int64_t arg = kNoViolation;
#pragma omp parallel for reduction(min : arg) schedule(static)
  for (std::int64_t mask = 0; mask < n; ++mask) {
    if (mask >= arg) continue;
    const auto m32 = static_cast<std::uint32_t>(mask);
    if (upper(m32) - lower(m32) == best) arg = mask;
  }
  return {static_cast<std::uint32_t>(arg), best};
}

}  // namespace sbalab
