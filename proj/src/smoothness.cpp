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

#include "sbalab/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sbalab/optimizer.hpp"

namespace sbalab {

double DeviationDistribution::density(double t) const {
  if (t < 0.0 || t > hi) return 0.0;
  return scale / (anchor - t);
}

double DeviationDistribution::mass() const {
  if (hi <= 0.0) return 0.0;
  return scale * std::log(anchor / (anchor - hi));
}

double DeviationDistribution::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  if (u >= mass()) return 0.0;
  // F(t) = s ln(a / (a - t))
  return anchor * -std::expm1(-u / scale);
}

DeviationDistribution make_deviation(DeviationFamily family, double shape, double anchor,
                                     SupportConvention conv) {
  if (!(anchor > 0.0) || !std::isfinite(anchor)) {
    throw DomainError("make_deviation: anchor must be positive and finite");
  }
  DeviationDistribution d;
  d.family = family;
  d.anchor = anchor;
  switch (family) {
    case DeviationFamily::kBlockUniform:
      if (!(shape >= 1.0)) throw DomainError("make_deviation: block size bound must be >= 1");
      d.scale = 1.0 / shape;
      break;
    case DeviationFamily::kGrandBundle:
      d.scale = 1.0;
      break;
    case DeviationFamily::kSingleBid:
      if (!(shape > 0.0)) throw DomainError("make_deviation: c must be positive");
      d.scale = shape;
      break;
  }
  // the density integrates to 1 on [0, a (1 - e^-1/s)]
  d.hi = -std::expm1(-1.0 / d.scale) * anchor;
  if (family == DeviationFamily::kSingleBid && conv == SupportConvention::kShrunk) {
    d.hi *= shape;
    if (d.mass() > 1.0 + 1e-12) {
      throw DomainError("make_deviation: the shrunk support needs c <= 1");
    }
  }
  d.residual = std::max(0.0, 1.0 - d.mass());
  return d;
}

Money block_deviation_bound(const DeviationDistribution& dist, std::span<const ItemSet> blocks,
                            std::span<const Money> prices) {
  Money total = 0.0;
  for (const ItemSet& q : blocks) {
    Money top = 0.0;
    q.for_each([&](int j) { top = std::max(top, prices[static_cast<std::size_t>(j)]); });
    total += static_cast<double>(q.count()) * std::max(0.0, dist.hi - top);
  }
  return dist.scale * total;
}

Money grand_deviation_bound(const DeviationDistribution& dist, std::span<const Money> prices) {
  Money top = 0.0;
  for (Money p : prices) top = std::max(top, p);
  return dist.scale * std::max(0.0, dist.hi - top);
}

Money bundle_deviation_bound(const DeviationDistribution& dist, const ItemSet& target,
                             std::span<const Money> prices) {
  const ItemSet one[] = {target};
  return block_deviation_bound(dist, one, prices);
}

Money utility_at_bid(std::span<const Valuation> vals, std::span<const Money> bids,
                     const TieRule& tie, int agent, Branch branch, Money t) {
  std::vector<Money> b(bids.begin(), bids.end());
  b.at(static_cast<std::size_t>(agent)) = t;
  const Outcome o = branch == Branch::kSingleBid ? run_single_bid(vals, b, tie)
                                                 : run_grand_bundle(vals, b, tie);
  return agent_utility(vals, o, agent);
}

namespace {

// integral over [l, r] of (alpha - c t) * s / (a - t), with r < a
double line_integral(const DeviationDistribution& d, double alpha, double c, double l,
                     double r) {
  const double a = d.anchor;
  const double log_ratio = std::log1p((r - l) / (a - r));
  return d.scale * ((alpha - c * a) * log_ratio + c * (r - l));
}

// integral over [l, r] of max_c (env[c] - c t) against the density
double envelope_integral(const DeviationDistribution& d, const std::vector<Money>& env,
                         double l, double r) {
  const auto best_at = [&](double t) {
    // the maximizer at t+, i.e. fewest items among ties
    std::size_t arg = 0;
    double best = env[0];
    for (std::size_t c = 1; c < env.size(); ++c) {
      const double u = env[c] - static_cast<double>(c) * t;
      if (u > best + 1e-15 * std::max(1.0, std::abs(best))) {
        best = u;
        arg = c;
      }
    }
    return arg;
  };
  double total = 0.0;
  double t = l;
  std::size_t c = best_at(l);
  while (t < r) {
    // next t where a line with fewer items overtakes line c
    double next = r;
    std::size_t next_c = c;
    for (std::size_t k = 0; k < c; ++k) {
      const double cross = (env[c] - env[k]) / static_cast<double>(c - k);
      if (cross > t && cross < next) {
        next = cross;
        next_c = k;
      }
    }
    total += line_integral(d, env[c], static_cast<double>(c), t, next);
    if (next_c == c) break;
    t = next;
    c = best_at(t);
    if (c == next_c || c > next_c) c = next_c;
  }
  return total;
}

std::vector<double> breakpoints(std::span<const Money> others, double hi, double extra) {
  std::vector<double> pts{0.0, hi};
  for (Money b : others) {
    if (b > 0.0 && b < hi) pts.push_back(b);
  }
  if (extra > 0.0 && extra < hi) pts.push_back(extra);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

Money exact_deviation_utility(std::span<const Valuation> vals, std::span<const Money> bids,
                              const TieRule& tie, int agent, Branch branch,
                              const DeviationDistribution& dist) {
  const auto me = static_cast<std::size_t>(agent);
  if (me >= vals.size() || bids.size() != vals.size()) {
    throw PreconditionError("exact_deviation_utility: bad agent or bid vector");
  }
  // the others in visit order; the agent's own bid only decides its slot
  std::vector<int> order;
  for (int i : visit_order(bids, tie)) {
    if (i != agent) order.push_back(i);
  }
  std::vector<Money> other_bids;
  for (int i : order) other_bids.push_back(bids[static_cast<std::size_t>(i)]);
  const Valuation& v = vals[me];
  const Money grand = v.grand_value();

  Money total = 0.0;
  if (dist.residual > 0.0) {
    total += dist.residual * utility_at_bid(vals, bids, tie, agent, branch, 0.0);
  }
  if (dist.hi <= 0.0) return total;

  if (branch == Branch::kSingleBid) {
    // remaining[k]: unsold goods after the first k others
    std::vector<ItemSet> remaining{ItemSet::range(v.m())};
    for (int i : order) {
      const auto ui = static_cast<std::size_t>(i);
      const ItemSet& avail = remaining.back();
      remaining.push_back(avail - demand_select(vals[ui], avail, bids[ui], tie.demand_tie(i)));
    }
    std::vector<std::vector<Money>> env(remaining.size());
    const auto pts = breakpoints(other_bids, dist.hi, -1.0);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      const double l = pts[s];
      const double r = pts[s + 1];
      const double mid = 0.5 * (l + r);
      const auto k = static_cast<std::size_t>(
          std::count_if(other_bids.begin(), other_bids.end(), [&](Money b) { return b > mid; }));
      if (env[k].empty()) env[k] = demand_envelope(v, remaining[k]);
      total += envelope_integral(dist, env[k], l, r);
    }
    return total;
  }

  // grand bundle: the first other that accepts when offered
  std::size_t first_accept = order.size();
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto ui = static_cast<std::size_t>(order[k]);
    if (vals[ui].grand_value() - bids[ui] >= -kMoneyTol) {
      first_accept = k;
      break;
    }
  }
  const auto pts = breakpoints(other_bids, dist.hi, grand);
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double l = pts[s];
    const double r = pts[s + 1];
    const double mid = 0.5 * (l + r);
    const auto k = static_cast<std::size_t>(
        std::count_if(other_bids.begin(), other_bids.end(), [&](Money b) { return b > mid; }));
    if (k <= first_accept && grand - mid >= 0.0) total += line_integral(dist, grand, 1.0, l, r);
  }
  return total;
}

std::vector<BidSample> ProfileSampler::draw(std::span<const Valuation> vals, int trials) {
  const std::size_t n = vals.size();
  Money top = 0.0;
  for (const Valuation& v : vals) top = std::max(top, v.grand_value());
  if (top <= 0.0) top = 1.0;
  std::vector<BidSample> out;
  const auto push_uniform = [&](Money b) {
    out.push_back({std::vector<Money>(n, b), std::vector<Money>(n, b)});
  };
  if (corners_) {
    const Money huge = 2.0 * top + 1.0;
    if (static_cast<int>(out.size()) < trials) push_uniform(0.0);
    if (static_cast<int>(out.size()) < trials) push_uniform(huge);
    if (static_cast<int>(out.size()) < trials) {
      push_uniform(0.0);
      out.back().sb[0] = huge;
      out.back().gb[0] = huge;
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(out.size()) < trials) {
    const double cap = 1.5 * unit(rng_) * top;
    BidSample s{std::vector<Money>(n), std::vector<Money>(n)};
    for (auto& b : s.sb) b = cap * unit(rng_);
    for (auto& b : s.gb) b = cap * unit(rng_);
    out.push_back(std::move(s));
  }
  return out;
}

std::string suite_name(SmoothnessSuite s) {
  switch (s) {
    case SmoothnessSuite::kBlockUniform: return "block-uniform";
    case SmoothnessSuite::kGrandDominant: return "grand-dominant";
    case SmoothnessSuite::kSmallBundles: return "small-bundles";
    case SmoothnessSuite::kLopsidedGrand: return "lopsided-grand";
    case SmoothnessSuite::kSpreadSingleBid: return "spread-single-bid";
    case SmoothnessSuite::kGeneralSingleBid: return "general-single-bid";
  }
  return "unknown";
}

namespace {

// What one agent does in the deviation profile.
struct Plan {
  enum class Kind { kZeroBid, kBlocks, kGrand, kBundle } kind = Kind::kZeroBid;
  DeviationDistribution dist;
  std::vector<ItemSet> blocks;
  ItemSet target;
};

Money plan_bound(const Plan& p, std::span<const Money> prices) {
  switch (p.kind) {
    case Plan::Kind::kZeroBid: return 0.0;
    case Plan::Kind::kBlocks: return block_deviation_bound(p.dist, p.blocks, prices);
    case Plan::Kind::kGrand: return grand_deviation_bound(p.dist, prices);
    case Plan::Kind::kBundle: return bundle_deviation_bound(p.dist, p.target, prices);
  }
  return 0.0;
}

Money plan_exact(const Plan& p, std::span<const Valuation> vals, std::span<const Money> bids,
                 const TieRule& tie, int agent, Branch branch) {
  if (p.kind == Plan::Kind::kZeroBid) return utility_at_bid(vals, bids, tie, agent, branch, 0.0);
  return exact_deviation_utility(vals, bids, tie, agent, branch, p.dist);
}

// Single-bid deviations onto the bundles of `alloc`, skipping agents whose
// bundle has zero value or at least `max_size` items.
std::vector<Plan> bundle_plans(std::span<const Valuation> vals, const Allocation& alloc,
                               double c, SupportConvention conv, int max_size, int& gamma) {
  std::vector<Plan> plans(vals.size());
  gamma = 1;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const int size = alloc[i].count();
    if (size == 0 || size >= max_size) continue;
    const Money worth = value(vals[i], alloc[i]);
    if (worth <= 0.0) continue;
    plans[i].kind = Plan::Kind::kBundle;
    plans[i].target = alloc[i];
    plans[i].dist = make_deviation(DeviationFamily::kSingleBid, c, worth / size, conv);
    gamma = std::max(gamma, size);
  }
  return plans;
}

Plan grand_plan(const Valuation& v) {
  Plan p;
  const Money grand = v.grand_value();
  if (grand <= 0.0) return p;
  p.kind = Plan::Kind::kGrand;
  p.dist = make_deviation(DeviationFamily::kGrandBundle, 1.0, grand);
  return p;
}

int sqrt_threshold(int m) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m)) - 1e-12));
}

void finish(SmoothnessReport& r) {
  r.min_margin = std::numeric_limits<double>::infinity();
  r.min_exact_margin = std::numeric_limits<double>::infinity();
  r.failing_profile = -1;
  r.bound_valid = true;
  r.bound_excess_profiles = 0;
  r.max_bound_excess = 0.0;
  for (std::size_t k = 0; k < r.profiles.size(); ++k) {
    const ProfileMargin& pm = r.profiles[k];
    r.min_margin = std::min(r.min_margin, pm.margin);
    r.min_exact_margin = std::min(r.min_exact_margin, pm.lhs_exact - pm.rhs);
    if (pm.margin < -kMoneyTol && r.failing_profile < 0) r.failing_profile = static_cast<int>(k);
    r.max_bound_excess = std::max(r.max_bound_excess, pm.lhs_bound - pm.lhs_exact);
    if (pm.lhs_exact < pm.lhs_bound - kMoneyTol) {
      r.bound_valid = false;
      ++r.bound_excess_profiles;
    }
  }
  if (r.profiles.empty()) r.min_margin = r.min_exact_margin = 0.0;
  r.pass = r.failing_profile < 0;
}

}  // namespace

SmoothnessReport smoothness_check(SmoothnessSuite suite, std::span<const Valuation> vals,
                                  std::span<const BidSample> bids,
                                  const SmoothnessOptions& opts) {
  SmoothnessReport r;
  r.suite = suite_name(suite);
  const int m = vals.front().m();
  const double root = std::sqrt(static_cast<double>(m));
  const OptimalAllocation opt = optimal_allocation(vals);
  r.opt = opt.welfare;

  std::vector<Plan> plans(vals.size());
  Branch branch = Branch::kSingleBid;
  switch (suite) {
    case SmoothnessSuite::kBlockUniform: {
      const int d = opts.d;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto w = is_d_ch(vals[i], d);
        if (!w) {
          r.applicable = false;
          return r;
        }
        if (w->unit_value <= 0.0) continue;
        for (const ItemSet& q : w->blocks) {
          if (q.subset_of(opt.alloc[i])) plans[i].blocks.push_back(q);
        }
        if (plans[i].blocks.empty()) continue;
        plans[i].kind = Plan::Kind::kBlocks;
        plans[i].dist = make_deviation(DeviationFamily::kBlockUniform, d, w->unit_value);
      }
      r.lambda = -std::expm1(-static_cast<double>(d)) / d;
      r.mu = 1.0;
      break;
    }
    case SmoothnessSuite::kGrandDominant: {
      branch = Branch::kGrandBundle;
      std::size_t star = 0;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i].grand_value() > vals[star].grand_value()) star = i;
      }
      plans[star] = grand_plan(vals[star]);
      const double beta = r.opt > 0.0 ? vals[star].grand_value() / r.opt : 1.0;
      r.lambda = beta * -std::expm1(-1.0);
      r.mu = 1.0;
      break;
    }
    case SmoothnessSuite::kSmallBundles: {
      int gamma = 1;
      plans = bundle_plans(vals, opt.alloc, opts.c, opts.conv, m + 1, gamma);
      r.lambda = opts.c * -std::expm1(-1.0 / opts.c);
      r.mu = opts.c * gamma;
      break;
    }
    case SmoothnessSuite::kGeneralSingleBid: {
      int gamma = 1;
      const double c = 1.0 / m;
      plans = bundle_plans(vals, opt.alloc, c, opts.conv, m + 1, gamma);
      r.lambda = -std::expm1(-static_cast<double>(m)) / m;
      r.mu = 1.0;
      break;
    }
    case SmoothnessSuite::kLopsidedGrand: {
      branch = Branch::kGrandBundle;
      const LopsidedReport lop = lopsided_check(vals, sqrt_threshold(m));
      if (!lop.lopsided) {
        r.applicable = false;
        return r;
      }
      if (!lop.large_agents.empty()) {
        int star = lop.large_agents.front();
        for (int i : lop.large_agents) {
          const auto ui = static_cast<std::size_t>(i);
          if (value(vals[ui], lop.witness[ui]) >
              value(vals[static_cast<std::size_t>(star)], lop.witness[static_cast<std::size_t>(star)])) {
            star = i;
          }
        }
        plans[static_cast<std::size_t>(star)] = grand_plan(vals[static_cast<std::size_t>(star)]);
      }
      r.lambda = -std::expm1(-1.0) / (2.0 * root);
      r.mu = 1.0;
      break;
    }
    case SmoothnessSuite::kSpreadSingleBid: {
      const int z = sqrt_threshold(m);
      const LopsidedReport lop = lopsided_check(vals, z);
      if (lop.lopsided) {
        r.applicable = false;
        return r;
      }
      int gamma = 1;
      plans = bundle_plans(vals, opt.alloc, 1.0 / root, opts.conv, z, gamma);
      r.lambda = -std::expm1(-root) / (2.0 * root);
      r.mu = 1.0;
      break;
    }
  }
  if (opts.lambda) r.lambda = *opts.lambda;
  if (opts.mu) r.mu = *opts.mu;

  for (const BidSample& sample : bids) {
    const std::vector<Money>& b = branch == Branch::kSingleBid ? sample.sb : sample.gb;
    const Outcome o = branch == Branch::kSingleBid ? run_single_bid(vals, b, opts.tie)
                                                   : run_grand_bundle(vals, b, opts.tie);
    ProfileMargin pm;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      pm.lhs_bound += plan_bound(plans[i], o.item_prices);
      pm.lhs_exact += plan_exact(plans[i], vals, b, opts.tie, static_cast<int>(i), branch);
    }
    pm.rhs = r.lambda * r.opt - r.mu * total_payments(o);
    pm.margin = pm.lhs_bound - pm.rhs;
    r.profiles.push_back(pm);
  }
  finish(r);
  return r;
}

SmoothnessReport hybrid_smoothness_check(std::span<const Valuation> vals,
                                         std::span<const BidSample> bids,
                                         const SmoothnessOptions& opts) {
  const double p = opts.p;
  if (!(p > 0.0 && p < 1.0)) throw DomainError("hybrid_smoothness_check: p must lie in (0, 1)");
  SmoothnessReport r;
  r.suite = "hybrid";
  const int m = vals.front().m();
  const double root = std::sqrt(static_cast<double>(m));
  const int z = sqrt_threshold(m);
  const LopsidedReport lop = lopsided_check(vals, z);
  r.opt = lop.opt;

  std::vector<Plan> plans(vals.size());
  const Branch branch = lop.lopsided ? Branch::kGrandBundle : Branch::kSingleBid;
  if (lop.lopsided) {
    if (!lop.large_agents.empty()) {
      auto star = static_cast<std::size_t>(lop.large_agents.front());
      for (int i : lop.large_agents) {
        const auto ui = static_cast<std::size_t>(i);
        if (value(vals[ui], lop.witness[ui]) > value(vals[star], lop.witness[star])) star = ui;
      }
      plans[star] = grand_plan(vals[star]);
    }
  } else {
    const OptimalAllocation opt = optimal_allocation(vals);
    int gamma = 1;
    plans = bundle_plans(vals, opt.alloc, 1.0 / root, opts.conv, z, gamma);
  }
  const double sb_lambda = -std::expm1(-root) / (2.0 * root);
  const double gb_lambda = -std::expm1(-1.0) / (2.0 * root);
  r.lambda = opts.lambda.value_or(std::min(p * sb_lambda, (1.0 - p) * gb_lambda));
  r.mu = opts.mu.value_or(1.0);
  const double w_dev = branch == Branch::kSingleBid ? p : 1.0 - p;
  const double w_keep = 1.0 - w_dev;

  for (const BidSample& sample : bids) {
    const HybridOutcome h = run_hybrid(vals, sample.sb, sample.gb, p, opts.tie);
    const Outcome& dev = branch == Branch::kSingleBid ? h.sb : h.gb;
    const Outcome& keep = branch == Branch::kSingleBid ? h.gb : h.sb;
    const std::vector<Money>& b = branch == Branch::kSingleBid ? sample.sb : sample.gb;
    ProfileMargin pm;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const auto ai = static_cast<int>(i);
      const Money kept = w_keep * agent_utility(vals, keep, ai);
      pm.lhs_bound += w_dev * plan_bound(plans[i], dev.item_prices) + kept;
      pm.lhs_exact += w_dev * plan_exact(plans[i], vals, b, opts.tie, ai, branch) + kept;
    }
    pm.rhs = r.lambda * r.opt - r.mu * h.expected_revenue();
    pm.margin = pm.lhs_bound - pm.rhs;
    r.profiles.push_back(pm);
  }
  finish(r);
  return r;
}

SmoothnessReport merge_reports(std::span<const SmoothnessReport> reports) {
  SmoothnessReport out;
  out.applicable = false;
  out.lambda = std::numeric_limits<double>::infinity();
  for (const SmoothnessReport& r : reports) {
    if (out.suite.empty()) out.suite = r.suite;
    if (!r.applicable) continue;
    out.applicable = true;
    out.lambda = std::min(out.lambda, r.lambda);
    out.mu = std::max(out.mu, r.mu);
    out.opt = std::max(out.opt, r.opt);
    out.profiles.insert(out.profiles.end(), r.profiles.begin(), r.profiles.end());
  }
  if (!out.applicable) out.lambda = 0.0;
  finish(out);
  return out;
}

}  // namespace sbalab
