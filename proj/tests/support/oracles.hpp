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

// Slow, obviously-correct reference computations used only by tests. None
// of them call the library routine they are compared against.

#ifndef SBALAB_TESTS_SUPPORT_ORACLES_HPP_
#define SBALAB_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "sbalab/mechanisms.hpp"
#include "sbalab/smoothness.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab::oracle {

// Value straight from the edge lists: max over parts of the sum of edges
// inside s.
inline Money edge_sum_value(const Valuation& v, const ItemSet& s) {
  Money best = 0.0;
  for (const HypergraphValuation* h : v.parts()) {
    Money sum = 0.0;
    for (const Hyperedge& e : h->edges()) {
      if (e.members.subset_of(s)) sum += e.weight;
    }
    best = std::max(best, sum);
  }
  return best;
}

// Welfare of the best assignment of every item to one of n agents or to
// nobody, by enumerating all (n+1)^m assignments.
inline Money brute_force_welfare(std::span<const Valuation> vals) {
  const int m = vals.front().m();
  const int n = static_cast<int>(vals.size());
  std::vector<int> owner(static_cast<std::size_t>(m), 0);  // 0 = nobody
  Money best = 0.0;
  while (true) {
    std::vector<ItemSet> bundles(static_cast<std::size_t>(n));
    for (int j = 0; j < m; ++j) {
      if (owner[static_cast<std::size_t>(j)] > 0) {
        bundles[static_cast<std::size_t>(owner[static_cast<std::size_t>(j)] - 1)].insert(j);
      }
    }
    Money sw = 0.0;
    for (int i = 0; i < n; ++i) sw += edge_sum_value(vals[static_cast<std::size_t>(i)], bundles[static_cast<std::size_t>(i)]);
    best = std::max(best, sw);
    int j = 0;
    while (j < m && ++owner[static_cast<std::size_t>(j)] > n) owner[static_cast<std::size_t>(j++)] = 0;
    if (j == m) break;
  }
  return best;
}

// Best utility v(T) - price |T| over subsets T of `available`, by enumeration.
inline Money brute_demand_utility(const Valuation& v, const ItemSet& available, Money price) {
  const std::vector<int> items = available.members();
  Money best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
    ItemSet t;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (mask >> k & 1) t.insert(items[k]);
    }
    best = std::max(best, edge_sum_value(v, t) - price * static_cast<double>(t.count()));
  }
  return best;
}

// The single-bid auction re-implemented from its description, with demand
// by enumeration.
inline std::vector<Money> brute_single_bid_utilities(std::span<const Valuation> vals,
                                                     std::span<const Money> bids,
                                                     std::span<const int> tie_order) {
  const std::size_t n = vals.size();
  std::vector<int> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = tie_order.empty() ? static_cast<int>(k) : tie_order[k];
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return bids[static_cast<std::size_t>(a)] > bids[static_cast<std::size_t>(b)];
  });
  ItemSet left = ItemSet::range(vals.front().m());
  std::vector<Money> u(n, 0.0);
  for (int i : order) {
    const auto ui = static_cast<std::size_t>(i);
    const std::vector<int> items = left.members();
    Money best = 0.0;
    ItemSet pick;
    int pick_size = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
      ItemSet t;
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (mask >> k & 1) t.insert(items[k]);
      }
      const Money val = edge_sum_value(vals[ui], t) - bids[ui] * t.count();
      // fewest items among ties
      if (val > best + kMoneyTol || (std::abs(val - best) <= kMoneyTol && t.count() < pick_size)) {
        best = std::max(best, val);
        pick = t;
        pick_size = t.count();
      }
    }
    u[ui] = edge_sum_value(vals[ui], pick) - bids[ui] * pick.count();
    left = left - pick;
  }
  return u;
}

// The grand-bundle auction re-implemented from its description: the
// highest bidder that does not lose money takes everything.
inline std::vector<Money> brute_grand_bundle_utilities(std::span<const Valuation> vals,
                                                      std::span<const Money> bids) {
  const std::size_t n = vals.size();
  std::vector<int> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = static_cast<int>(k);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return bids[static_cast<std::size_t>(a)] > bids[static_cast<std::size_t>(b)];
  });
  std::vector<Money> u(n, 0.0);
  for (int i : order) {
    const auto ui = static_cast<std::size_t>(i);
    const Money grand = edge_sum_value(vals[ui], ItemSet::range(vals[ui].m()));
    if (grand - bids[ui] >= -1e-9) {
      u[ui] = grand - bids[ui];
      break;
    }
  }
  return u;
}

// Adaptive Simpson integration of E[f(t)] under the deviation density plus
// the residual point mass at 0. Integration restarts at every listed jump.
inline double quadrature_expectation(const DeviationDistribution& d,
                                     const std::function<double(double)>& f,
                                     std::vector<double> jumps, double tol = 1e-11) {
  const auto g = [&](double t) { return f(t) * d.density(t); };
  const std::function<double(double, double, double, double, double, double, int)> simpson =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = g(lm);
        const double frm = g(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
          return left + right + (left + right - whole) / 15.0;
        }
        return simpson(a, m, fa, flm, fm, left, depth - 1) +
               simpson(m, b, fm, frm, fb, right, depth - 1);
      };
  jumps.push_back(0.0);
  jumps.push_back(d.hi);
  std::sort(jumps.begin(), jumps.end());
  double total = d.residual * f(0.0);
  for (std::size_t s = 0; s + 1 < jumps.size(); ++s) {
    const double lo = std::max(0.0, jumps[s]);
    const double hi = std::min(d.hi, jumps[s + 1]);
    if (!(hi - lo > 1e-14)) continue;
    // stay off the jump points themselves, where ties decide the outcome
    const double a = lo + 1e-13;
    const double b = hi - 1e-13;
    const double fa = g(a);
    const double fb = g(b);
    const double fm = g(0.5 * (a + b));
    total += simpson(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 40);
  }
  return total;
}

// Monte-Carlo mean of f over draws from the distribution.
inline double monte_carlo_expectation(const DeviationDistribution& d,
                                      const std::function<double(double)>& f, int draws,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  for (int k = 0; k < draws; ++k) sum += f(d.sample(rng));
  return sum / draws;
}

}  // namespace sbalab::oracle

#endif  // SBALAB_TESTS_SUPPORT_ORACLES_HPP_
