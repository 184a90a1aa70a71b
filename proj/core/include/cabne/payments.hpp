#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cabne/auction.hpp"

namespace cabne {

enum class PaymentRule { kFirstPrice, kVcg, kVcgNearest, kProportional, kProxy };

/// "first-price", "vcg", "vcg-nearest", "proportional", "proxy".
[[nodiscard]] std::string_view rule_name(PaymentRule rule);
[[nodiscard]] PaymentRule parse_rule(std::string_view name);
[[nodiscard]] const std::vector<PaymentRule>& all_rules();

struct PaymentVector {
  std::vector<Rational> amounts;

  [[nodiscard]] const Rational& operator[](int i) const { return amounts.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] Rational total() const;
  friend bool operator==(const PaymentVector&, const PaymentVector&) = default;
};

/// sum_{j in payers} p_j >= rhs, with payers = N \ coalition.
struct CoreConstraint {
  BidderSet coalition;
  BidderSet payers;
  Rational rhs;
};

struct CorePolytope {
  std::vector<CoreConstraint> constraints;
  std::vector<Rational> upper_bounds;  ///< b_i(x_i); zero for losers

  [[nodiscard]] int num_bidders() const { return static_cast<int>(upper_bounds.size()); }
  /// True when p satisfies every constraint and 0 <= p_i <= upper_bounds[i].
  [[nodiscard]] bool contains(const PaymentVector& p) const;
};

struct CoreOptions {
  /// Largest accepted number of coalitions 2^n.
  std::uint64_t coalition_budget = std::uint64_t{1} << 15;
  /// Keep constraints with rhs <= 0; they never bind because payments are non-negative.
  bool keep_vacuous = false;
  WdOptions wd{};
};

[[nodiscard]] PaymentVector first_price(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x);
[[nodiscard]] PaymentVector vcg(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                                const WdOptions& options = {});

/// One constraint per coalition L strictly inside N, plus the individual-rationality bounds.
[[nodiscard]] CorePolytope core_constraints(const AuctionInstance& instance, const BidProfile& bids,
                                            const Allocation& x, const CoreOptions& options = {});

/// Minimum of sum p over the core, by exact simplex on the dual LP.
[[nodiscard]] Rational min_revenue(const CorePolytope& core);
/// A point attaining min_revenue.
[[nodiscard]] PaymentVector min_revenue_point(const CorePolytope& core);

[[nodiscard]] PaymentVector vcg_nearest(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                                        const CoreOptions& options = {});

/// Smallest alpha >= 0 putting alpha * b(x) in the core.
[[nodiscard]] Rational proportional_scale(const AuctionInstance& instance, const BidProfile& bids,
                                          const Allocation& x, const CorePolytope& core);
[[nodiscard]] PaymentVector proportional(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                                         const CoreOptions& options = {});

/// Smallest cap alpha >= 0 putting min(alpha, b_i(x_i)) in the core.
[[nodiscard]] Rational proxy_cap(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                                 const CorePolytope& core);
[[nodiscard]] PaymentVector proxy(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                                  const CoreOptions& options = {});

[[nodiscard]] PaymentVector compute_payments(PaymentRule rule, const AuctionInstance& instance, const BidProfile& bids,
                                             const Allocation& x, const CoreOptions& options = {});

}  // namespace cabne
