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

// Randomized deviations and numeric checks of the (lambda, mu) smoothness
// inequality
//
//   sum_i E[u_i(deviation_i, b_-i)] >= lambda * OPT - mu * sum_i payment_i(b)
//
// for the single-bid, grand-bundle and hybrid mechanisms.
//
// Every deviation bid has density s / (anchor - t) on [0, hi]. Two
// left-hand sides are reported per bid profile: `lhs_bound`, the closed-form
// lower bound in which an agent is credited only for buying its target at
// its deviation bid, and `lhs_exact`, the true expected utility obtained by
// integrating the agent's actual mechanism utility against the density.
// The inequality is checked on the bound; lhs_exact >= lhs_bound is checked
// as well.

#ifndef SBALAB_SMOOTHNESS_HPP_
#define SBALAB_SMOOTHNESS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sbalab/hierarchy.hpp"
#include "sbalab/mechanisms.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

enum class DeviationFamily {
  // s = 1/d, anchor = per-item block value; hi = (1 - e^-d) anchor
  kBlockUniform,
  // s = 1, anchor = value of all goods; hi = (1 - e^-1) anchor
  kGrandBundle,
  // s = c, anchor = average per-item value of the target bundle;
  // hi = (1 - e^-1/c) anchor
  kSingleBid,
};

// kNormalized puts the single-bid family's support top at (1 - e^-1/c) D,
// where the density integrates to exactly 1 and the closed-form expected
// utility below is exact. kShrunk uses c (1 - e^-1/c) D and puts the missing
// mass at bid 0; it is a distribution only for c <= 1.
enum class SupportConvention { kNormalized, kShrunk };

struct DeviationDistribution {
  DeviationFamily family = DeviationFamily::kGrandBundle;
  double scale = 1.0;   // s
  double anchor = 1.0;  // density pole
  double hi = 0.0;      // support top
  double residual = 0.0;  // point mass at bid 0

  double density(double t) const;
  // integral of the density over [0, hi]
  double mass() const;
  // Inverse-CDF draw; lands on 0 with probability `residual`.
  double sample(std::mt19937_64& rng) const;
};

// shape = d for kBlockUniform, c for kSingleBid, ignored for kGrandBundle.
DeviationDistribution make_deviation(DeviationFamily family, double shape, double anchor,
                                     SupportConvention conv = SupportConvention::kNormalized);

// Closed-form lower bounds on the expected deviation utility given the item
// prices of the current bid profile.
//   block-uniform: s * sum over target blocks Q of |Q| * (hi - max_{j in Q} p_j)^+
//   grand bundle:  (hi - max_j p_j)^+
//   single bid:    s * |S| * (hi - max_{j in S} p_j)^+
Money block_deviation_bound(const DeviationDistribution& dist, std::span<const ItemSet> blocks,
                            std::span<const Money> prices);
Money grand_deviation_bound(const DeviationDistribution& dist, std::span<const Money> prices);
Money bundle_deviation_bound(const DeviationDistribution& dist, const ItemSet& target,
                             std::span<const Money> prices);

// E[u_agent(t, b_-agent)] for t drawn from dist, on one branch, by exact
// piecewise integration of the agent's utility curve.
Money exact_deviation_utility(std::span<const Valuation> vals, std::span<const Money> bids,
                              const TieRule& tie, int agent, Branch branch,
                              const DeviationDistribution& dist);

// Agent's utility when it alone changes its bid to t.
Money utility_at_bid(std::span<const Valuation> vals, std::span<const Money> bids,
                     const TieRule& tie, int agent, Branch branch, Money t);

struct BidSample {
  std::vector<Money> sb;
  std::vector<Money> gb;
};

// Corner profiles (all zero, all above every value, agent 0 alone above
// every value) followed by random ones: each profile draws a spread s ~ U(0,1)
// and bids i.i.d. U(0, 1.5 * s * max_i v_i([m])).
class ProfileSampler {
 public:
  explicit ProfileSampler(std::uint64_t seed, bool corners = true)
      : rng_(seed), corners_(corners) {}
  std::vector<BidSample> draw(std::span<const Valuation> vals, int trials);

 private:
  std::mt19937_64 rng_;
  bool corners_;
};

enum class SmoothnessSuite {
  // every agent block-uniform with blocks of size <= d; single-bid
  kBlockUniform,
  // grand bundle; the agent with the largest v([m]) deviates
  kGrandDominant,
  // single-bid; everyone deviates onto its optimal bundle with family c
  kSmallBundles,
  // grand bundle on profiles where large bundles carry half of OPT, z = sqrt m
  kLopsidedGrand,
  // single-bid on the remaining profiles, z = sqrt m, c = 1 / z
  kSpreadSingleBid,
  // single-bid with c = 1 / m
  kGeneralSingleBid,
};
std::string suite_name(SmoothnessSuite s);

struct SmoothnessOptions {
  int d = 1;        // kBlockUniform
  double c = 1.0;   // kSmallBundles
  double p = 0.5;   // hybrid
  TieRule tie;
  SupportConvention conv = SupportConvention::kNormalized;
  // override the suite's (lambda, mu)
  std::optional<double> lambda;
  std::optional<double> mu;
};

struct ProfileMargin {
  Money lhs_bound = 0.0;
  Money lhs_exact = 0.0;
  Money rhs = 0.0;
  Money margin = 0.0;  // lhs_bound - rhs
};

struct SmoothnessReport {
  std::string suite;
  double lambda = 0.0;
  double mu = 0.0;
  Money opt = 0.0;
  std::vector<ProfileMargin> profiles;
  Money min_margin = 0.0;
  int failing_profile = -1;  // first profile with margin < -kMoneyTol
  // Diagnostics, not part of `pass`: whether the closed-form deviation
  // utility stayed below the mechanism's exact expected deviation utility,
  // and the inequality evaluated with the exact utilities instead.
  bool bound_valid = true;   // lhs_exact >= lhs_bound - kMoneyTol everywhere
  int bound_excess_profiles = 0;
  Money max_bound_excess = 0.0;  // max of lhs_bound - lhs_exact
  Money min_exact_margin = 0.0;  // min of lhs_exact - rhs
  bool applicable = true;    // profile belongs to the suite's valuation class
  // every closed-form margin >= -kMoneyTol
  bool pass = true;
  double implied_poa() const { return std::max(1.0, mu) / lambda; }
};

// Checks the inequality for one valuation profile over sampled bid
// profiles. `applicable` is false (and nothing is checked) when the profile
// is outside the suite's class.
SmoothnessReport smoothness_check(SmoothnessSuite suite, std::span<const Valuation> vals,
                                  std::span<const BidSample> bids,
                                  const SmoothnessOptions& opts = {});

// The hybrid with branch probability p: lopsided profiles deviate on the
// grand-bundle branch, the rest on the single-bid branch; each agent keeps
// its bid on the other branch. lambda = (1 - e^-1) / (4 sqrt m) and mu = 1
// unless overridden.
SmoothnessReport hybrid_smoothness_check(std::span<const Valuation> vals,
                                         std::span<const BidSample> bids,
                                         const SmoothnessOptions& opts = {});

// Merges per-valuation-profile reports of one suite.
SmoothnessReport merge_reports(std::span<const SmoothnessReport> reports);

}  // namespace sbalab

#endif  // SBALAB_SMOOTHNESS_HPP_
