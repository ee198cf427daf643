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

// Exhaustive subset-enumeration kernels.
//
// Every kernel comes in two flavours: the OpenMP-parallel version used by the
// library, and a `_serial` reference that is kept for the equivalence tests
// and the benchmark. Both flavours return bit-identical results: each
// reduction is either an exact max or a min under a total order, so the
// thread schedule cannot change the answer.
//
// Kernels work on "local" masks: a ground set of at most kMaxLocalItems items
// renumbered 0..c-1 (see ItemSet::compress).

#ifndef SBALAB_SUBSET_KERNELS_HPP_
#define SBALAB_SUBSET_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "sbalab/errors.hpp"

namespace sbalab {

inline constexpr int kMaxLocalItems = 24;

// How an agent breaks ties between utility-maximizing bundles.
enum class DemandTie {
  // Smallest cardinality, then smallest bit pattern; the empty set wins when
  // the best utility is zero.
  kFewestItems,
  // Largest cardinality, then smallest bit pattern.
  kMostItems,
};

// A set function over local masks, v(mask) = max over parts of the summed
// weight of the part's edges contained in mask.
struct LocalEdge {
  std::uint32_t mask;
  double weight;
};

class LocalSetFunction {
 public:
  LocalSetFunction() = default;
  explicit LocalSetFunction(std::vector<std::vector<LocalEdge>> parts)
      : parts_(std::move(parts)) {}

  double operator()(std::uint32_t mask) const {
    double best = 0.0;
    bool first = true;
    for (const auto& part : parts_) {
      double sum = 0.0;
      for (const LocalEdge& e : part) {
        if ((e.mask & ~mask) == 0) sum += e.weight;
      }
      if (first || sum > best) best = sum;
      first = false;
    }
    return best;
  }

  const std::vector<std::vector<LocalEdge>>& parts() const { return parts_; }

 private:
  std::vector<std::vector<LocalEdge>> parts_;
};

struct SubsetChoice {
  std::uint32_t mask = 0;
  double score = 0.0;
};

// argmax over mask in [0, 2^c) of f(mask) - popcount(mask) * price. Masks whose
// utility is within kMoneyTol of the maximum are tied and resolved by `tie`.
SubsetChoice argmax_demand(const LocalSetFunction& f, int c, Money price, DemandTie tie);
SubsetChoice argmax_demand_serial(const LocalSetFunction& f, int c, Money price,
                                  DemandTie tie);

// argmax of f over masks with exactly k of the c bits set; ties within
// kMoneyTol go to the smallest mask.
SubsetChoice argmax_fixed_size(const LocalSetFunction& f, int c, int k);
SubsetChoice argmax_fixed_size_serial(const LocalSetFunction& f, int c, int k);

// Table of f over all 2^c masks.
std::vector<double> value_table(const LocalSetFunction& f, int c);
std::vector<double> value_table_serial(const LocalSetFunction& f, int c);

// One agent layer of the subset dynamic program for welfare maximization:
//   next[S] = max_{T subset of S} prev[S \ T] + agent[T]
// choice[S] receives the maximizing T; among exact ties the smallest T wins.
void allocation_layer(std::span<const double> prev, std::span<const double> agent,
                      int m, std::span<double> next, std::span<std::uint32_t> choice);
void allocation_layer_serial(std::span<const double> prev,
                             std::span<const double> agent, int m,
                             std::span<double> next, std::span<std::uint32_t> choice);

// Exhaustive monotonicity / subadditivity scan of a value table over 2^m
// masks. Witnesses are the smallest violating masks (by U, then S).
struct StructureScan {
  bool monotone = true;
  bool subadditive = true;
  // monotone violation: table[sub] > table[super] with sub = super minus one item
  std::uint32_t monotone_super = 0;
  std::uint32_t monotone_sub = 0;
  // subadditive violation: table[a | b] > table[a] + table[b], a and b disjoint
  std::uint32_t subadditive_a = 0;
  std::uint32_t subadditive_b = 0;
};
StructureScan scan_structure(std::span<const double> table, int m);
StructureScan scan_structure_serial(std::span<const double> table, int m);

// max over masks of upper(mask) - lower(mask), together with the smallest mask
// attaining it. Used to recheck "approximator <= valuation everywhere".
SubsetChoice max_excess(const LocalSetFunction& upper, const LocalSetFunction& lower,
                        int c);
SubsetChoice max_excess_serial(const LocalSetFunction& upper,
                               const LocalSetFunction& lower, int c);

}  // namespace sbalab

#endif  // SBALAB_SUBSET_KERNELS_HPP_
