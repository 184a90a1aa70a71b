#include "cabne/planes.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>

#include "cabne/errors.hpp"
#include "cabne/parallel.hpp"

namespace cabne {

namespace {

const PiecewiseConstantStrategy& piecewise(const StrategyProfile& profile, int j) {
  const auto* pc = std::get_if<PiecewiseConstantStrategy>(&profile.at(static_cast<std::size_t>(j)));
  if (pc == nullptr) {
    throw PreconditionViolation("opponent " + std::to_string(j) +
                                " plays a truthful strategy; bracket it to a piecewise-constant one first");
  }
  return *pc;
}

bool bidder_has_nested(const AuctionInstance& a, int j) {
  for (int x = 0; x < a.num_bundles(j); ++x) {
    for (int y = 0; y < a.num_bundles(j); ++y) {
      if (x != y && a.bundle(j, x).subset_of(a.bundle(j, y))) return true;
    }
  }
  return false;
}

void check_profile(const DomainConfig& domain, int bidder, const StrategyProfile& profile) {
  if (static_cast<int>(profile.size()) != domain.num_bidders()) throw InvalidInput("profile size does not match domain");
  if (bidder < 0 || bidder >= domain.num_bidders()) throw InvalidInput("bidder index out of range");
}

}  // namespace

BidProfile OpponentBidDistribution::profile(const AuctionInstance& instance, const std::vector<Rational>& own,
                                            const Entry& entry) const {
  std::vector<std::vector<Rational>> bids(bid_tables.size());
  for (std::size_t j = 0; j < bid_tables.size(); ++j) {
    bids[j] = static_cast<int>(j) == bidder ? own : bid_tables[j][entry.choice[j]];
  }
  return BidProfile(instance, std::move(bids));
}

OpponentBidDistribution exact_opponent_distribution(const DomainConfig& domain, int bidder,
                                                    const StrategyProfile& profile, std::uint64_t budget) {
  check_profile(domain, bidder, profile);
  const int n = domain.num_bidders();
  OpponentBidDistribution dist;
  dist.bidder = bidder;
  dist.bid_tables.resize(static_cast<std::size_t>(n));
  std::vector<std::vector<Rational>> masses(static_cast<std::size_t>(n));
  std::uint64_t size = 1;
  for (int j = 0; j < n; ++j) {
    if (j == bidder) continue;
    const auto& s = piecewise(profile, j);
    const auto m = cell_masses(s, domain.priors[static_cast<std::size_t>(j)]);
    std::map<std::vector<Rational>, Rational> merged;
    for (std::size_t cell = 0; cell < s.num_cells(); ++cell) {
      if (m[cell].is_zero()) continue;
      merged[s.bid(cell)] += m[cell];
    }
    // Cell masses assume independent bundle values; a constant strategy needs no masses.
    if (merged.size() > 1 && bidder_has_nested(domain.auction, j)) {
      throw PreconditionViolation("exact opponent distribution needs independent bundle values; bidder " +
                                  domain.auction.bidder(j).id + " has nested bundles, use sampling");
    }
    for (auto& [b, p] : merged) {
      dist.bid_tables[static_cast<std::size_t>(j)].push_back(b);
      masses[static_cast<std::size_t>(j)].push_back(p);
    }
    size *= merged.size();
    if (size > budget) {
      throw BudgetExceeded("exact opponent support exceeds " + std::to_string(budget) + " profiles; use sampling");
    }
  }
  std::vector<std::uint32_t> choice(static_cast<std::size_t>(n), 0);
  dist.support.reserve(size);
  while (true) {
    Rational w(1);
    for (int j = 0; j < n; ++j) {
      if (j != bidder) w *= masses[static_cast<std::size_t>(j)][choice[static_cast<std::size_t>(j)]];
    }
    dist.support.push_back({choice, std::move(w)});
    int j = n - 1;
    for (; j >= 0; --j) {
      if (j == bidder) continue;
      auto& c = choice[static_cast<std::size_t>(j)];
      if (++c < masses[static_cast<std::size_t>(j)].size()) break;
      c = 0;
    }
    if (j < 0) break;
  }
  return dist;
}

OpponentBidDistribution sampled_opponent_distribution(const DomainConfig& domain, int bidder,
                                                      const StrategyProfile& profile, const ValuationSamples& values) {
  check_profile(domain, bidder, profile);
  if (values.size() == 0) throw InvalidInput("sampling mode needs at least one sample");
  const int n = domain.num_bidders();
  OpponentBidDistribution dist;
  dist.bidder = bidder;
  dist.exact = false;
  dist.samples = values.size();
  dist.bid_tables.resize(static_cast<std::size_t>(n));
  // Per opponent: cell -> index into the table of distinct bids.
  std::vector<std::vector<std::uint32_t>> cell_to_bid(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (j == bidder) continue;
    const auto& s = piecewise(profile, j);
    std::map<std::vector<Rational>, std::uint32_t> index;
    for (std::size_t cell = 0; cell < s.num_cells(); ++cell) index.emplace(s.bid(cell), 0);
    std::uint32_t next = 0;
    for (auto& [b, k] : index) {
      k = next++;
      dist.bid_tables[static_cast<std::size_t>(j)].push_back(b);
    }
    auto& map = cell_to_bid[static_cast<std::size_t>(j)];
    for (std::size_t cell = 0; cell < s.num_cells(); ++cell) map.push_back(index.at(s.bid(cell)));
  }
  std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
  std::vector<std::uint32_t> choice(static_cast<std::size_t>(n), 0);
  for (std::size_t t = 0; t < values.size(); ++t) {
    for (int j = 0; j < n; ++j) {
      if (j == bidder) continue;
      const auto& s = std::get<PiecewiseConstantStrategy>(profile[static_cast<std::size_t>(j)]);
      choice[static_cast<std::size_t>(j)] = cell_to_bid[static_cast<std::size_t>(j)][s.locate(values.bidder_values(t, j))];
    }
    ++counts[choice];
  }
  const Rational total(static_cast<std::int64_t>(values.size()));
  for (const auto& [c, k] : counts) dist.support.push_back({c, Rational(static_cast<std::int64_t>(k)) / total});
  return dist;
}

StrategyProfile bracket_truthful(const DomainConfig& domain, const StrategyProfile& profile, const Rational& step,
                                 Rounding rounding) {
  StrategyProfile out = profile;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (std::holds_alternative<TruthfulStrategy>(out[j])) out[j] = truthful_rounded(domain.priors.at(j), step, rounding);
  }
  return out;
}

ProfileOutcome compute_outcome(const AuctionInstance& instance, PaymentRule rule, int bidder, const BidProfile& bids,
                               const CoreOptions& options) {
  WdOptions wd = options.wd;
  wd.zero_bid_eligible = wd.zero_bid_eligible.with(bidder);
  const WdResult result = winner_determination(instance, bids, wd);
  ProfileOutcome out;
  out.ties.reserve(result.allocations.size());
  for (const auto& x : result.allocations) {
    const PaymentVector p = compute_payments(rule, instance, bids, x, options);
    out.ties.push_back({x[bidder], p[bidder]});
  }
  return out;
}

std::vector<TieBreakOrder> TieBreakOrder::all(int r) {
  std::vector<int> rank(static_cast<std::size_t>(r));
  std::iota(rank.begin(), rank.end(), 1);
  std::vector<TieBreakOrder> out;
  do {
    out.push_back(TieBreakOrder{rank});
  } while (std::next_permutation(rank.begin(), rank.end()));
  return out;
}

Rational UtilityPlane::value(const std::vector<Rational>& v) const {
  Rational u = -expected_payment;
  for (std::size_t k = 0; k < win_prob.size(); ++k) u += win_prob[k] * v.at(k);
  return u;
}

double UtilityPlane::value(const double* v) const {
  double u = -payment_double;
  for (std::size_t k = 0; k < slope_double.size(); ++k) u += slope_double[k] * v[k];
  return u;
}

void UtilityPlane::refresh_double() {
  slope_double.clear();
  for (const auto& p : win_prob) slope_double.push_back(p.to_double());
  payment_double = expected_payment.to_double();
}

void accumulate(UtilityPlane& plane, const ProfileOutcome& outcome, const std::vector<Rational>& own_bid,
                const Rational& weight) {
  // Survivors: the ordinary tie set for uniform tie-breaking; the members giving the
  // bidder a top-ranked bundle under the perturbation order otherwise.
  auto rank_of = [&](int choice) { return choice == kNoBundle ? 0 : plane.order.rank[static_cast<std::size_t>(choice)]; };
  int best = -1;
  std::size_t count = 0;
  for (const auto& t : outcome.ties) {
    if (plane.order.random()) {
      if (t.choice == kNoBundle || own_bid[static_cast<std::size_t>(t.choice)].sign() > 0) ++count;
      continue;
    }
    const int r = rank_of(t.choice);
    if (r > best) {
      best = r;
      count = 0;
    }
    if (r == best) ++count;
  }
  if (count == 0) throw Error("profile outcome has no admissible allocation");
  const Rational share = weight / Rational(static_cast<std::int64_t>(count));
  for (const auto& t : outcome.ties) {
    const bool keep = plane.order.random()
                          ? (t.choice == kNoBundle || own_bid[static_cast<std::size_t>(t.choice)].sign() > 0)
                          : rank_of(t.choice) == best;
    if (!keep) continue;
    if (t.choice != kNoBundle) plane.win_prob[static_cast<std::size_t>(t.choice)] += share;
    if (!t.payment.is_zero()) plane.expected_payment += share * t.payment;
  }
}

OutcomeCache::OutcomeCache(AuctionInstance instance, PaymentRule rule, CoreOptions options, Rational unit,
                           std::size_t max_entries)
    : instance_(std::move(instance)),
      rule_(rule),
      options_(options),
      unit_(std::move(unit)),
      max_entries_(max_entries) {
  if (unit_.sign() <= 0) throw InvalidInput("cache unit must be positive");
}

bool OutcomeCache::key_of(int bidder, const BidProfile& b, std::string& key) const {
  key.clear();
  key.push_back(static_cast<char>(bidder));
  for (const auto& row : b.all()) {
    for (const auto& x : row) {
      const Rational units = x / unit_;
      if (!units.is_integer() || !units.is_small()) return false;
      const double d = units.to_double();
      if (d > std::numeric_limits<std::int32_t>::max()) return false;
      const auto u = static_cast<std::int32_t>(d);
      char bytes[sizeof u];
      std::memcpy(bytes, &u, sizeof u);
      key.append(bytes, sizeof u);
    }
  }
  return true;
}

std::vector<std::vector<UtilityPlane>> OutcomeCache::planes(const OpponentBidDistribution& dist,
                                                            const std::vector<std::vector<Rational>>& bids,
                                                            const std::vector<TieBreakOrder>& orders, int threads) {
  const int i = dist.bidder;
  const std::size_t support = dist.support.size();
  // Phase 1: distinct missing profiles.
  std::unordered_map<std::string, std::size_t> missing;
  std::vector<std::string> missing_keys;
  std::vector<std::pair<std::size_t, std::size_t>> missing_at;  // (bid, entry) witness
  std::string key;
  for (std::size_t a = 0; a < bids.size(); ++a) {
    for (std::size_t e = 0; e < support; ++e) {
      const BidProfile b = dist.profile(instance_, bids[a], dist.support[e]);
      if (!key_of(i, b, key)) continue;
      if (map_.count(key) != 0 || missing.count(key) != 0) continue;
      missing.emplace(key, missing_keys.size());
      missing_keys.push_back(key);
      missing_at.emplace_back(a, e);
    }
  }
  // Phase 2: compute them in parallel.
  std::vector<ProfileOutcome> computed(missing_keys.size());
  parallel_for(missing_keys.size(), threads, [&](std::size_t m) {
    const auto [a, e] = missing_at[m];
    computed[m] = compute_outcome(instance_, rule_, i, dist.profile(instance_, bids[a], dist.support[e]), options_);
  });
  // Phase 3: insert while under the memory limit; the rest live only for this call.
  std::unordered_map<std::string, ProfileOutcome> overflow;
  for (std::size_t m = 0; m < missing_keys.size(); ++m) {
    if (map_.size() < max_entries_) {
      map_.emplace(std::move(missing_keys[m]), std::move(computed[m]));
    } else {
      overflow.emplace(std::move(missing_keys[m]), std::move(computed[m]));
    }
  }
  // Phase 4: read-only accumulation per bid.
  std::vector<std::vector<UtilityPlane>> out(bids.size());
  parallel_for(bids.size(), threads, [&](std::size_t a) {
    std::vector<UtilityPlane> row;
    for (const auto& order : orders) {
      UtilityPlane p;
      p.bid = bids[a];
      p.win_prob.assign(bids[a].size(), Rational{});
      p.order = order;
      row.push_back(std::move(p));
    }
    std::string k;
    for (std::size_t e = 0; e < support; ++e) {
      const BidProfile b = dist.profile(instance_, bids[a], dist.support[e]);
      const ProfileOutcome* outcome = nullptr;
      ProfileOutcome local;
      if (key_of(i, b, k)) {
        const auto it = map_.find(k);
        outcome = it != map_.end() ? &it->second : &overflow.at(k);
      } else {
        local = compute_outcome(instance_, rule_, i, b, options_);
        outcome = &local;
      }
      for (auto& p : row) accumulate(p, *outcome, bids[a], dist.support[e].weight);
    }
    for (auto& p : row) p.refresh_double();
    out[a] = std::move(row);
  });
  return out;
}

UtilityPlane utility_plane(const AuctionInstance& instance, PaymentRule rule, int bidder, const std::vector<Rational>& bid,
                           const OpponentBidDistribution& dist, const TieBreakOrder& order, const CoreOptions& options) {
  if (dist.bidder != bidder) throw InvalidInput("distribution was built for a different bidder");
  if (static_cast<int>(bid.size()) != instance.num_bundles(bidder)) throw InvalidInput("bid has the wrong dimension");
  UtilityPlane p;
  p.bid = bid;
  p.win_prob.assign(bid.size(), Rational{});
  p.order = order;
  for (const auto& e : dist.support) {
    accumulate(p, compute_outcome(instance, rule, bidder, dist.profile(instance, bid, e), options), bid, e.weight);
  }
  p.refresh_double();
  return p;
}

Rational tie_winning_utility(const AuctionInstance& instance, PaymentRule rule, int bidder,
                             const std::vector<Rational>& valuation, const std::vector<Rational>& bid,
                             const TieBreakOrder& order, const OpponentBidDistribution& dist,
                             const CoreOptions& options) {
  if (order.random()) throw InvalidInput("tie-winning utility needs a bundle order");
  return utility_plane(instance, rule, bidder, bid, dist, order, options).value(valuation);
}

Rational i_optimal_utility(const AuctionInstance& instance, PaymentRule rule, int bidder,
                           const std::vector<Rational>& valuation, const std::vector<Rational>& bid,
                           const OpponentBidDistribution& dist, const CoreOptions& options) {
  const int r = instance.num_bundles(bidder);
  if (r > 4) throw BudgetExceeded("i-optimal utility enumerates r! orders; r = " + std::to_string(r) + " exceeds 4");
  bool first = true;
  Rational best;
  for (const auto& order : TieBreakOrder::all(r)) {
    const Rational u = tie_winning_utility(instance, rule, bidder, valuation, bid, order, dist, options);
    if (first || best < u) best = u;
    first = false;
  }
  return best;
}

}  // namespace cabne
