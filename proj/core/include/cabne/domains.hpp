#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cabne/auction.hpp"
#include "cabne/payments.hpp"

namespace cabne {

inline constexpr int kDomainSchemaVersion = 1;

/// Independent uniform value distribution on [lo, hi] for one bundle.
struct UniformPrior {
  Rational lo;
  Rational hi;
  friend bool operator==(const UniformPrior&, const UniformPrior&) = default;
};

/// What the sampler does when a draw gives a sub-bundle more value than a super-bundle.
enum class FreeDisposalPolicy { kResample, kClamp };

struct DomainConfig {
  int schema_version = kDomainSchemaVersion;
  std::string name;
  AuctionInstance auction;
  /// priors[i][k] for bidder i's k-th bundle of interest.
  std::vector<std::vector<UniformPrior>> priors;
  /// Bidder groups that share one strategy. Bidders not listed form singleton classes.
  std::vector<std::vector<int>> symmetry_classes;
  /// Bidders for whom truthful bidding is dominant; they are not solved for.
  std::vector<bool> truthful;
  /// Rules the domain declares non-decreasing on its bundles of interest.
  std::vector<PaymentRule> nondecreasing_rules;
  FreeDisposalPolicy free_disposal = FreeDisposalPolicy::kResample;
  /// Non-fatal findings from validation, e.g. partially overlapping nested priors.
  std::vector<std::string> warnings;

  [[nodiscard]] int num_bidders() const { return auction.num_bidders(); }
  [[nodiscard]] const Rational& v_max(int i, int k) const;
  /// Every bidder's class, singletons included, ordered by smallest member.
  [[nodiscard]] std::vector<std::vector<int>> classes() const;
  [[nodiscard]] bool declares_nondecreasing(PaymentRule rule) const;
  /// True when some bidder has two bundles of interest with one a subset of the other.
  [[nodiscard]] bool has_nested_bundles() const;

  friend bool operator==(const DomainConfig& a, const DomainConfig& b);
};

/// Checks shapes, prior intervals and free disposal. Returns the config with warnings
/// filled in; throws InvalidInput on errors.
[[nodiscard]] DomainConfig validate_domain(DomainConfig config);

/// Two locals on single goods with U[0,1] values and a global on both goods with U[0,2]
/// values who bids truthfully. The locals share a symmetry class.
[[nodiscard]] DomainConfig build_llg();

[[nodiscard]] DomainConfig parse_domain(const std::string& json_text);
[[nodiscard]] DomainConfig load_domain(const std::string& path);
[[nodiscard]] std::string domain_to_json(const DomainConfig& config);

/// Valuation draws stored in double precision: value(s, i, k).
class ValuationSamples {
 public:
  ValuationSamples(const DomainConfig& config, std::size_t count);
  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] double value(std::size_t sample, int bidder, int bundle) const {
    return values_[sample * stride_ + offsets_[static_cast<std::size_t>(bidder)] + static_cast<std::size_t>(bundle)];
  }
  [[nodiscard]] const double* bidder_values(std::size_t sample, int bidder) const {
    return values_.data() + sample * stride_ + offsets_[static_cast<std::size_t>(bidder)];
  }
  double* mutable_bidder_values(std::size_t sample, int bidder) {
    return values_.data() + sample * stride_ + offsets_[static_cast<std::size_t>(bidder)];
  }

 private:
  std::size_t count_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

/// Independent per-bidder draws, deterministic in the seed. Each bidder uses its own
/// sub-stream, so adding samples never changes earlier ones. Nested bundles of one bidder
/// satisfy v(K) <= v(K') for K inside K' by resampling (or clamping, per config).
[[nodiscard]] ValuationSamples sample_valuations(const DomainConfig& config, std::size_t count, std::uint64_t seed);

}  // namespace cabne
