#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cabne/auction.hpp"
#include "cabne/payments.hpp"

namespace cabne {

/// One bidder raises some of their bids while everyone else stays put; `allocation`
/// must be efficient under both the base and the raised profile.
struct MonotonicityProbe {
  AuctionInstance instance;
  BidProfile base;
  int bidder = 0;
  /// New bids of `bidder`, one per bundle of interest; componentwise >= the base bids.
  std::vector<Rational> raised;
  Allocation allocation;

  [[nodiscard]] BidProfile raised_profile() const;
  /// Raise of a single coordinate to `amount`.
  static MonotonicityProbe single(AuctionInstance instance, BidProfile base, int bidder, int bundle, Rational amount,
                                  Allocation allocation);
};

struct ViolationCertificate {
  PaymentRule rule = PaymentRule::kFirstPrice;
  MonotonicityProbe probe;
  Rational payment_before;
  Rational payment_after;
};

/// Compares the bidder's payment at the shared allocation before and after the raise.
/// Throws InvalidProbe when the raise is not upward or the allocation is not efficient
/// under both profiles.
[[nodiscard]] std::optional<ViolationCertificate> check_probe(PaymentRule rule, const MonotonicityProbe& probe,
                                                              const CoreOptions& options = {});

/// An auction to probe: instance plus base bids.
struct ProbeInstance {
  AuctionInstance instance;
  BidProfile bids;
};
using InstanceGenerator = std::function<ProbeInstance(std::mt19937_64&)>;

/// Random instances with n bidders, m goods, up to r bundles each, and integer bids in
/// [0, max_bid]. Ranges are inclusive.
[[nodiscard]] InstanceGenerator random_family(int min_bidders, int max_bidders, int goods, int max_bundles,
                                              int max_bid);
/// Three bidders on two goods, each bidding on a random non-empty set of {A}, {B}, {A,B}.
[[nodiscard]] InstanceGenerator three_bidder_two_good_family(int max_bid = 8);
/// Two bidders on two goods where bidder 1 is multi-minded on {A} and {A,B}, bidder 2 on {B}.
[[nodiscard]] InstanceGenerator two_bidder_two_good_family(int max_bid = 20);
/// LLG restricted to bundles of interest, bids on a 1/grid lattice of the prior supports.
[[nodiscard]] InstanceGenerator llg_family(int grid = 16);
/// Cycles through a fixed list of instances.
[[nodiscard]] InstanceGenerator fixed_family(std::vector<ProbeInstance> instances);

struct SearchOptions {
  std::uint64_t seed = 1;
  /// Maximum number of probes checked across all instances.
  std::uint64_t probe_budget = 100'000;
  /// Also try raising all of a bidder's bids by a common amount.
  bool multi_coordinate = false;
  int threads = 1;
  CoreOptions core{};
};

struct SearchResult {
  std::vector<ViolationCertificate> certificates;
  std::uint64_t probes_checked = 0;
  std::uint64_t instances_checked = 0;
  /// Probes skipped because the rule has no payment of its form on one of the profiles.
  std::uint64_t probes_skipped = 0;
};

/// Raises that keep an efficient allocation efficient. For a raise of one coordinate the
/// largest such raise comes directly from the constrained winner-determination welfare, so
/// boundary probes are exact. Deterministic for a given seed regardless of thread count.
[[nodiscard]] SearchResult search_violations(PaymentRule rule, const InstanceGenerator& generator,
                                             const SearchOptions& options);

/// Every probe the search would check on one instance, in a fixed order.
[[nodiscard]] std::vector<MonotonicityProbe> probes_for(const AuctionInstance& instance, const BidProfile& bids,
                                                        bool multi_coordinate, const WdOptions& wd = {});

/// Greedily drops bidders, bundles and goods, then shrinks bids, keeping only changes
/// under which check_probe still reports a violation.
[[nodiscard]] ViolationCertificate minimize_certificate(const ViolationCertificate& certificate,
                                                        const CoreOptions& options = {});

}  // namespace cabne
