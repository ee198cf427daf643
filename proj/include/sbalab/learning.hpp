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

// Equilibrium computation over finite bid grids: exponential-weights
// learning (coarse correlated equilibria), best-response dynamics and
// exhaustive search (pure equilibria), and welfare ratios.
//
// In the hybrid mechanism an agent acts on both branches, and its expected
// utility is p * u_single + (1 - p) * u_bundle. The two terms depend on
// disjoint parts of the action, so each agent runs one learner per branch
// and best responses are taken branch by branch.

#ifndef SBALAB_LEARNING_HPP_
#define SBALAB_LEARNING_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sbalab/mechanisms.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

enum class MechanismKind { kSingleBid, kGrandBundle, kHybrid };
std::string_view mechanism_name(MechanismKind k);
MechanismKind parse_mechanism(std::string_view name);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kSingleBid;
  double p = 0.5;  // hybrid only
  TieRule tie;

  // Branches an agent bids on, in profile order.
  std::vector<Branch> branches() const;
  // Weight of branch slot c in the expected utility.
  double branch_weight(std::size_t c) const;
};

// Sorted, duplicate-free candidate bids of one agent.
struct BidGrid {
  std::vector<Money> bids;

  std::size_t size() const { return bids.size(); }
  // Index of the grid point equal to b (within kMoneyTol); throws if absent.
  std::size_t index_of(Money b) const;
};

// {0} plus a geometric ladder from 1e-3 * top to top with the given ratio,
// plus `critical`. top = v([m]) (1 if that is zero).
BidGrid default_grid(const Valuation& v, std::span<const Money> critical = {},
                     double ratio = 1.05);
std::vector<BidGrid> default_grids(std::span<const Valuation> vals,
                                   std::span<const Money> critical = {}, double ratio = 1.05);

// Grid indices per branch slot and agent: idx[c][i].
struct ProfileIndex {
  std::vector<std::vector<int>> idx;
  bool operator==(const ProfileIndex&) const = default;
};

// Bids of branch slot c under a profile.
std::vector<Money> slot_bids(const ProfileIndex& p, std::size_t c,
                             std::span<const BidGrid> grids);

// Exact utilities of one agent against fixed opposing bids, computed from a
// single run of the other agents: the agent's bid only decides where it is
// inserted in the visit order. Caches demand answers, so keep one instance
// per game and do not share it between threads.
class GameOracle {
 public:
  GameOracle(std::span<const Valuation> vals, MechanismSpec mech);
  ~GameOracle();
  GameOracle(GameOracle&&) noexcept;
  GameOracle& operator=(GameOracle&&) noexcept;

  std::size_t agents() const;
  const MechanismSpec& mechanism() const;

  // out[a] = u_agent(grid[a], bids_-agent) on one branch.
  void counterfactuals(Branch b, std::span<const Money> bids, int agent,
                       std::span<const Money> grid, std::span<Money> out);
  // Same outcome as run_single_bid / run_grand_bundle, with cached demands.
  Outcome run(Branch b, std::span<const Money> bids);

  // Expected utility and welfare of a full profile.
  std::vector<Money> utilities(const ProfileIndex& p, std::span<const BidGrid> grids);
  Money welfare(const ProfileIndex& p, std::span<const BidGrid> grids);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RateSchedule {
  // eta_t = scale * sqrt(8 ln K / t); utilities divided by v_i([m])
  double scale = 1.0;
};

struct PlayHistory {
  MechanismSpec mech;
  int rounds = 0;
  std::uint64_t seed = 0;
  // actions[t] is the profile played in round t
  std::vector<ProfileIndex> actions;
  // expected utility of each agent in each round: utility[t][i]
  std::vector<std::vector<Money>> utility;
  // expected welfare per round (exact over the hybrid coin)
  std::vector<Money> welfare;
  // cf_sum[i][c][a]: summed utility of grid bid a on branch slot c
  std::vector<std::vector<std::vector<Money>>> cf_sum;
  // realized_sum[i][c]: summed utility on branch slot c
  std::vector<std::vector<Money>> realized_sum;

  Money mean_welfare() const;
};

// Every agent runs exponential weights over its grid (one learner per
// branch slot) against the realized play; deterministic given seed.
PlayHistory no_regret_run(std::span<const Valuation> vals, const MechanismSpec& mech,
                          std::span<const BidGrid> grids, int rounds, std::uint64_t seed,
                          RateSchedule rate = {});

// Average-regret of an agent: best fixed grid deviation's mean utility minus
// the mean realized utility. Uses the counterfactual sums logged during play.
Money regret_of(const PlayHistory& h, int agent);
// Same quantity recomputed by running the mechanism for every round and
// every deviation.
Money regret_by_replay(std::span<const Valuation> vals, std::span<const BidGrid> grids,
                       const PlayHistory& h, int agent);

// CSV: round, agent, bid, utility, realized_sw. Hybrid bids print as
// "single;bundle".
void write_history_csv(std::ostream& os, const PlayHistory& h, std::span<const BidGrid> grids);

struct BestResponseResult {
  bool converged = false;
  ProfileIndex profile;
  int sweeps = 0;
  int moves = 0;
  // on a repeat, the profiles of the detected cycle
  std::vector<ProfileIndex> cycle;
};

// Round-robin exact best responses. An agent switches only when some grid
// bid beats its current one by more than kMoneyTol, and then to the lowest
// such bid attaining the maximum. Stops at a sweep without moves, a repeated
// profile, or max_sweeps.
BestResponseResult best_response_dynamics(std::span<const Valuation> vals,
                                          const MechanismSpec& mech,
                                          std::span<const BidGrid> grids, ProfileIndex start,
                                          int max_sweeps = 1000);

// All-zero-bid start.
ProfileIndex zero_profile(const MechanismSpec& mech, std::size_t n);

// Largest gain of any agent from any unilateral grid deviation, recomputed
// by direct mechanism runs (independent of GameOracle).
struct DeviationAudit {
  Money max_gain = 0.0;
  int agent = -1;
  std::size_t slot = 0;
  Money deviation_bid = 0.0;
  bool is_equilibrium() const { return max_gain <= kMoneyTol; }
};
DeviationAudit audit_profile(std::span<const Valuation> vals, const MechanismSpec& mech,
                             std::span<const BidGrid> grids, const ProfileIndex& profile);

// Every pure equilibrium of the grid game; the product of grid sizes over
// agents and slots must not exceed `limit`.
std::vector<ProfileIndex> enumerate_pure_equilibria(std::span<const Valuation> vals,
                                                    const MechanismSpec& mech,
                                                    std::span<const BidGrid> grids,
                                                    std::uint64_t limit = 4'000'000);

struct PoaEstimate {
  Money opt = 0.0;
  Money worst_sw = 0.0;
  Money best_sw = 0.0;
  double ratio_worst = 0.0;  // opt / worst_sw, infinite at zero welfare
  double ratio_best = 0.0;   // opt / best_sw
};

// Ratios of `opt` to the supplied equilibrium welfares (nonempty).
PoaEstimate poa_estimate(Money opt, std::span<const Money> equilibrium_welfare);

}  // namespace sbalab

#endif  // SBALAB_LEARNING_HPP_
