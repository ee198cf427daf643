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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

namespace sbalab {

namespace {

int check_profile(std::span<const Valuation> vals, const char* who) {
  if (vals.empty()) throw PreconditionError(std::string(who) + ": no agents");
  const int m = vals.front().m();
  for (const Valuation& v : vals) {
    if (v.m() != m) throw PreconditionError(std::string(who) + ": valuations disagree on m");
  }
  if (m > kOptimizerCap) {
    throw CapacityError(std::string(who) + ": m = " + std::to_string(m) + " exceeds " +
                        std::to_string(kOptimizerCap));
  }
  return m;
}

std::vector<std::vector<double>> agent_tables(std::span<const Valuation> vals, int m) {
  const std::vector<int> basis = ItemSet::range(m).members();
  std::vector<std::vector<double>> tables;
  tables.reserve(vals.size());
  for (const Valuation& v : vals) tables.push_back(value_table(v.localize(basis), m));
  return tables;
}

template <typename Layer>
OptimalAllocation solve(std::span<const Valuation> vals, Layer layer) {
  const int m = check_profile(vals, "optimal_allocation");
  const std::size_t size = std::size_t{1} << m;
  const auto tables = agent_tables(vals, m);
  std::vector<double> prev(size, 0.0);
  std::vector<double> next(size);
  std::vector<std::vector<std::uint32_t>> choice(vals.size(),
                                                 std::vector<std::uint32_t>(size));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    layer(prev, tables[i], m, next, choice[i]);
    prev.swap(next);
  }
  OptimalAllocation out;
  out.welfare = prev[size - 1];
  out.alloc.assign(vals.size(), ItemSet{});
  const std::vector<int> basis = ItemSet::range(m).members();
  std::uint32_t s = static_cast<std::uint32_t>(size - 1);
  for (std::size_t i = vals.size(); i-- > 0;) {
    const std::uint32_t t = choice[i][s];
    out.alloc[i] = ItemSet::expand(t, basis);
    s &= ~t;
  }
  return out;
}

}  // namespace

OptimalAllocation optimal_allocation(std::span<const Valuation> vals) {
  return solve(vals, [](auto&&... args) { allocation_layer(args...); });
}

OptimalAllocation optimal_allocation_serial(std::span<const Valuation> vals) {
  return solve(vals, [](auto&&... args) { allocation_layer_serial(args...); });
}

Money social_welfare(std::span<const Valuation> vals, const Allocation& alloc) {
  if (alloc.size() != vals.size()) {
    throw PreconditionError("social_welfare: allocation has the wrong number of agents");
  }
  ItemSet used;
  Money sw = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (alloc[i].intersects(used)) throw DomainError("social_welfare: bundles overlap");
    used |= alloc[i];
    sw += value(vals[i], alloc[i]);
  }
  return sw;
}

LopsidedReport lopsided_check(std::span<const Valuation> vals, int z) {
  const int m = check_profile(vals, "lopsided_check");
  const std::size_t size = std::size_t{1} << m;
  const std::size_t n = vals.size();
  const auto tables = agent_tables(vals, m);

  // best[i][S]: optimal welfare of agents < i on items S
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(size, 0.0));
  std::vector<std::uint32_t> scratch(size);
  for (std::size_t i = 0; i < n; ++i) {
    allocation_layer(best[i], tables[i], m, best[i + 1], scratch);
  }

  std::vector<double> large(size, 0.0);
  std::vector<double> next(size);
  std::vector<std::vector<std::uint32_t>> choice(n, std::vector<std::uint32_t>(size, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev_best = best[i];
    const auto& cur_best = best[i + 1];
    const auto& table = tables[i];
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(size); ++si) {
      const auto s = static_cast<std::uint32_t>(si);
      double g = -1.0;
      std::uint32_t arg = 0;
      std::uint32_t t = 0;
      while (true) {
        const std::uint32_t rest = s & ~t;
        if (prev_best[rest] + table[t] >= cur_best[s] - kMoneyTol) {
          const double gain = std::popcount(t) >= z ? table[t] : 0.0;
          if (large[rest] + gain > g) {
            g = large[rest] + gain;
            arg = t;
          }
        }
        if (t == s) break;
        t = (t - s) & s;
      }
      next[s] = g;
      choice[i][s] = arg;
    }
    large.swap(next);
  }

  LopsidedReport r;
  r.opt = best[n][size - 1];
  r.large_welfare = large[size - 1];
  r.lopsided = r.large_welfare >= 0.5 * r.opt - kMoneyTol;
  r.witness.assign(n, ItemSet{});
  const std::vector<int> basis = ItemSet::range(m).members();
  std::uint32_t s = static_cast<std::uint32_t>(size - 1);
  for (std::size_t i = n; i-- > 0;) {
    const std::uint32_t t = choice[i][s];
    r.witness[i] = ItemSet::expand(t, basis);
    if (std::popcount(t) >= z && !r.witness[i].empty()) r.large_agents.push_back(static_cast<int>(i));
    s &= ~t;
  }
  std::reverse(r.large_agents.begin(), r.large_agents.end());
  return r;
}

}  // namespace sbalab
