#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cabne/rational.hpp"

namespace cabne {

inline constexpr int kMaxGoods = 64;
inline constexpr int kMaxBidders = 63;
/// Choice index meaning "the empty bundle".
inline constexpr int kNoBundle = -1;

/// Subset of the auction's goods, one bit per good.
class Bundle {
 public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint64_t mask) : mask_(mask) {}

  [[nodiscard]] constexpr std::uint64_t mask() const { return mask_; }
  [[nodiscard]] constexpr bool empty() const { return mask_ == 0; }
  [[nodiscard]] constexpr int size() const { return std::popcount(mask_); }
  [[nodiscard]] constexpr bool contains(int good) const { return (mask_ >> good) & 1U; }
  [[nodiscard]] constexpr bool intersects(Bundle other) const { return (mask_ & other.mask_) != 0; }
  [[nodiscard]] constexpr bool subset_of(Bundle other) const { return (mask_ & ~other.mask_) == 0; }
  [[nodiscard]] constexpr Bundle operator|(Bundle other) const { return Bundle(mask_ | other.mask_); }
  [[nodiscard]] constexpr Bundle without(Bundle other) const { return Bundle(mask_ & ~other.mask_); }

  friend constexpr bool operator==(Bundle, Bundle) = default;
  friend constexpr auto operator<=>(Bundle, Bundle) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Subset of bidders, one bit per bidder index.
class BidderSet {
 public:
  constexpr BidderSet() = default;
  constexpr explicit BidderSet(std::uint64_t mask) : mask_(mask) {}
  static constexpr BidderSet all(int n) {
    return BidderSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr BidderSet single(int i) { return BidderSet(std::uint64_t{1} << i); }

  [[nodiscard]] constexpr std::uint64_t mask() const { return mask_; }
  [[nodiscard]] constexpr bool empty() const { return mask_ == 0; }
  [[nodiscard]] constexpr int size() const { return std::popcount(mask_); }
  [[nodiscard]] constexpr bool contains(int i) const { return (mask_ >> i) & 1U; }
  [[nodiscard]] constexpr BidderSet with(int i) const { return BidderSet(mask_ | (std::uint64_t{1} << i)); }
  [[nodiscard]] constexpr BidderSet without(int i) const { return BidderSet(mask_ & ~(std::uint64_t{1} << i)); }
  [[nodiscard]] constexpr BidderSet complement(int n) const { return BidderSet(all(n).mask_ & ~mask_); }
  [[nodiscard]] std::vector<int> members() const;

  friend constexpr bool operator==(BidderSet, BidderSet) = default;

 private:
  std::uint64_t mask_ = 0;
};

struct BidderSpec {
  std::string id;
  std::vector<Bundle> bundles;  ///< bundles of interest, at most r of them
};

/// Goods, bidders, and each bidder's bundles of interest. Validated on construction.
class AuctionInstance {
 public:
  AuctionInstance() = default;
  AuctionInstance(std::vector<std::string> goods, std::vector<BidderSpec> bidders);

  /// Builds bundles from good names, e.g. {{"A"}, {"A", "B"}}.
  static AuctionInstance from_names(std::vector<std::string> goods,
                                    const std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>& bidders);

  [[nodiscard]] int num_goods() const { return static_cast<int>(goods_.size()); }
  [[nodiscard]] int num_bidders() const { return static_cast<int>(bidders_.size()); }
  [[nodiscard]] const std::vector<std::string>& goods() const { return goods_; }
  [[nodiscard]] const std::vector<BidderSpec>& bidders() const { return bidders_; }
  [[nodiscard]] const BidderSpec& bidder(int i) const { return bidders_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] int num_bundles(int i) const { return static_cast<int>(bidder(i).bundles.size()); }
  /// Bundle for choice index `k` of bidder `i`; the empty bundle for kNoBundle.
  [[nodiscard]] Bundle bundle(int i, int k) const;
  [[nodiscard]] Bundle all_goods() const;
  [[nodiscard]] int max_bundles() const;
  [[nodiscard]] BidderSet all_bidders() const { return BidderSet::all(num_bidders()); }

  [[nodiscard]] int bidder_index(std::string_view id) const;
  [[nodiscard]] int good_index(std::string_view name) const;
  [[nodiscard]] Bundle bundle_from_names(const std::vector<std::string>& names) const;
  [[nodiscard]] std::vector<std::string> bundle_names(Bundle bundle) const;
  /// "{A,B}" style label; "{}" for the empty bundle.
  [[nodiscard]] std::string bundle_label(Bundle bundle) const;

  friend bool operator==(const AuctionInstance& a, const AuctionInstance& b);

 private:
  std::vector<std::string> goods_;
  std::vector<BidderSpec> bidders_;
};

/// Non-negative bids of every bidder on each of their bundles of interest.
class BidProfile {
 public:
  BidProfile() = default;
  BidProfile(const AuctionInstance& instance, std::vector<std::vector<Rational>> bids);
  static BidProfile zeros(const AuctionInstance& instance);

  [[nodiscard]] int num_bidders() const { return static_cast<int>(bids_.size()); }
  /// Bid of bidder `i` on choice `k`; zero for kNoBundle.
  [[nodiscard]] const Rational& bid(int i, int k) const;
  [[nodiscard]] const std::vector<Rational>& bids_of(int i) const { return bids_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const std::vector<std::vector<Rational>>& all() const { return bids_; }

  void set(int i, int k, Rational amount);
  void set_bids_of(int i, std::vector<Rational> amounts);

  friend bool operator==(const BidProfile&, const BidProfile&) = default;

 private:
  std::vector<std::vector<Rational>> bids_;
};

/// Per-bidder choice: a bundle-of-interest index or kNoBundle.
struct Allocation {
  std::vector<int> choice;

  [[nodiscard]] int operator[](int i) const { return choice.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] int num_bidders() const { return static_cast<int>(choice.size()); }
  [[nodiscard]] BidderSet winners() const;
  /// True when every choice index is in range and the assigned bundles are pairwise disjoint.
  [[nodiscard]] bool valid_for(const AuctionInstance& instance) const;
  static Allocation empty(int num_bidders) { return Allocation{std::vector<int>(static_cast<std::size_t>(num_bidders), kNoBundle)}; }

  friend bool operator==(const Allocation&, const Allocation&) = default;
  friend auto operator<=>(const Allocation&, const Allocation&) = default;
};

struct WdOptions {
  std::uint64_t node_budget = 10'000'000;
  /// Bidders allowed to be assigned a bundle they bid exactly zero on. Everyone else
  /// needs a strictly positive bid to receive a bundle.
  BidderSet zero_bid_eligible{};
};

struct WdResult {
  Rational welfare;
  /// Every welfare-maximizing allocation, sorted.
  std::vector<Allocation> allocations;
};

/// Sum of b_j(x_j) over bidders j in `subset`.
[[nodiscard]] Rational reported_welfare(const AuctionInstance& instance, const BidProfile& bids,
                                        const Allocation& allocation, BidderSet subset);
[[nodiscard]] Rational reported_welfare(const AuctionInstance& instance, const BidProfile& bids,
                                        const Allocation& allocation);

/// The full tie set X(b).
[[nodiscard]] WdResult winner_determination(const AuctionInstance& instance, const BidProfile& bids,
                                            const WdOptions& options = {});

/// X_{-i}(K, b_{-i}): bidder `bidder` is fixed to choice `bundle` (or kNoBundle) and the
/// others share the remaining goods. `welfare` counts the other bidders only.
[[nodiscard]] WdResult constrained_winner_determination(const AuctionInstance& instance, int bidder, int bundle,
                                                        const BidProfile& bids, const WdOptions& options = {});

/// X_L(b_L): only bidders in `coalition` may win.
[[nodiscard]] WdResult coalition_winner_determination(const AuctionInstance& instance, BidderSet coalition,
                                                      const BidProfile& bids, const WdOptions& options = {});

/// Welfare of X_L(b_L) without materializing the tie set.
[[nodiscard]] Rational coalition_welfare(const AuctionInstance& instance, BidderSet coalition, const BidProfile& bids,
                                         const WdOptions& options = {});

}  // namespace cabne
