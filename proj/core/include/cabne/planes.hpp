#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cabne/auction.hpp"
#include "cabne/domains.hpp"
#include "cabne/payments.hpp"
#include "cabne/strategy.hpp"

namespace cabne {

/// Distribution of the other bidders' bids as a finite weighted support. Each opponent's
/// distinct bids are listed once in bid_tables; support entries index into them.
struct OpponentBidDistribution {
  int bidder = 0;
  std::vector<std::vector<std::vector<Rational>>> bid_tables;  ///< [j][index] -> bid vector; empty for `bidder`
  struct Entry {
    std::vector<std::uint32_t> choice;  ///< per bidder; ignored for `bidder`
    Rational weight;
  };
  std::vector<Entry> support;
  bool exact = true;
  std::uint64_t samples = 0;  ///< sampling mode only

  /// Full bid profile with `own` in the bidder's slot.
  [[nodiscard]] BidProfile profile(const AuctionInstance& instance, const std::vector<Rational>& own,
                                   const Entry& entry) const;
};

/// Exact product distribution of the opponents' piecewise-constant strategies under the
/// domain priors. Throws PreconditionViolation for truthful opponents or non-constant opponents with nested bundles,
/// and BudgetExceeded when the support is larger than `budget`.
[[nodiscard]] OpponentBidDistribution exact_opponent_distribution(const DomainConfig& domain, int bidder,
                                                                  const StrategyProfile& profile,
                                                                  std::uint64_t budget = 1'000'000);

/// Common-random-number sampling: every sample row of `values` maps to one opponent bid
/// profile; identical profiles are merged with weight count / samples.
[[nodiscard]] OpponentBidDistribution sampled_opponent_distribution(const DomainConfig& domain, int bidder,
                                                                    const StrategyProfile& profile,
                                                                    const ValuationSamples& values);

/// Replaces truthful strategies by their grid-rounded bracket.
[[nodiscard]] StrategyProfile bracket_truthful(const DomainConfig& domain, const StrategyProfile& profile,
                                               const Rational& step, Rounding rounding);

/// Bidder i's choice in one allocation of the extended tie set and i's payment there.
struct TieOutcome {
  int choice = kNoBundle;
  Rational payment;
};

/// The extended tie set of one full profile: every welfare maximizer when bidder i may also
/// win bundles they bid zero on. The ordinary tie set is the subset where i's bundle is
/// empty or carries a positive bid.
struct ProfileOutcome {
  std::vector<TieOutcome> ties;
};

[[nodiscard]] ProfileOutcome compute_outcome(const AuctionInstance& instance, PaymentRule rule, int bidder,
                                             const BidProfile& bids, const CoreOptions& options = {});

/// Preference order over bidder i's bundles: rank[k] in 1..r, distinct. The empty bundle
/// has rank 0. Empty `rank` means ordinary uniform tie-breaking.
struct TieBreakOrder {
  std::vector<int> rank;
  [[nodiscard]] bool random() const { return rank.empty(); }
  /// All r! orders, in lexicographic order of the rank vector.
  static std::vector<TieBreakOrder> all(int r);
};

/// Expected utility for a fixed bid as a linear function of the valuation.
struct UtilityPlane {
  std::vector<Rational> bid;
  std::vector<Rational> win_prob;
  Rational expected_payment;
  TieBreakOrder order;  ///< empty for uniform tie-breaking

  [[nodiscard]] Rational value(const std::vector<Rational>& v) const;
  [[nodiscard]] double value(const double* v) const;
  void refresh_double();
  std::vector<double> slope_double;
  double payment_double = 0;
};

/// Adds weight * (per-bundle win fraction, payment) of one profile outcome to a plane
/// under the given tie-breaking.
void accumulate(UtilityPlane& plane, const ProfileOutcome& outcome, const std::vector<Rational>& own_bid,
                const Rational& weight);

/// Memo of profile outcomes keyed by the full bid profile, shared across candidate bids and
/// iterations. Bids are keyed in units of `unit`; a bid that is not a multiple of the unit
/// is computed without caching.
class OutcomeCache {
 public:
  OutcomeCache(AuctionInstance instance, PaymentRule rule, CoreOptions options, Rational unit,
               std::size_t max_entries = 4'000'000);

  /// Planes of every candidate bid against `dist`, one per tie-breaking order. Result is
  /// indexed [bid][order]. Computes missing outcomes with `threads` workers.
  [[nodiscard]] std::vector<std::vector<UtilityPlane>> planes(const OpponentBidDistribution& dist,
                                                              const std::vector<std::vector<Rational>>& bids,
                                                              const std::vector<TieBreakOrder>& orders, int threads);
  [[nodiscard]] std::size_t size() const { return map_.size(); }
  [[nodiscard]] const AuctionInstance& instance() const { return instance_; }
  [[nodiscard]] PaymentRule rule() const { return rule_; }

 private:
  [[nodiscard]] bool key_of(int bidder, const BidProfile& b, std::string& key) const;

  AuctionInstance instance_;
  PaymentRule rule_;
  CoreOptions options_;
  Rational unit_;
  std::size_t max_entries_;
  std::unordered_map<std::string, ProfileOutcome> map_;
};

/// One plane without a cache.
[[nodiscard]] UtilityPlane utility_plane(const AuctionInstance& instance, PaymentRule rule, int bidder,
                                         const std::vector<Rational>& bid, const OpponentBidDistribution& dist,
                                         const TieBreakOrder& order = {}, const CoreOptions& options = {});

/// Tie-winning expected utility: the limit of perturbing the bid by delta * rank as delta
/// goes to zero, with the payment charged at the unperturbed bid.
[[nodiscard]] Rational tie_winning_utility(const AuctionInstance& instance, PaymentRule rule, int bidder,
                                           const std::vector<Rational>& valuation, const std::vector<Rational>& bid,
                                           const TieBreakOrder& order, const OpponentBidDistribution& dist,
                                           const CoreOptions& options = {});

/// Maximum of tie_winning_utility over all r! orders. Throws BudgetExceeded for r > 4.
[[nodiscard]] Rational i_optimal_utility(const AuctionInstance& instance, PaymentRule rule, int bidder,
                                         const std::vector<Rational>& valuation, const std::vector<Rational>& bid,
                                         const OpponentBidDistribution& dist, const CoreOptions& options = {});

}  // namespace cabne
