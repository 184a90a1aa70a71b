#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cabne/domains.hpp"
#include "cabne/envelope.hpp"
#include "cabne/payments.hpp"
#include "cabne/planes.hpp"
#include "cabne/strategy.hpp"

namespace cabne {

/// Every grid point {0, c, 2c, ...} up to v_max in each dimension, last dimension fastest.
/// Throws BudgetExceeded when the count is above `budget`.
[[nodiscard]] std::vector<std::vector<Rational>> cell_vertex_bids(const std::vector<Rational>& v_max, const Rational& step,
                                                                  std::uint64_t budget = 1'000'000);

struct SolverConfig {
  PaymentRule rule = PaymentRule::kProxy;
  Rational step{1, 64};
  Rational target_epsilon{1, 50};
  int max_iterations = 50;
  int min_iterations = 2;
  std::uint64_t seed = 1;
  /// Largest exact opponent support; above it the solver samples.
  std::uint64_t exact_budget = 1'000'000;
  bool force_sampling = false;
  std::size_t samples = 100'000;
  /// Solve rules the domain does not declare non-decreasing. The certificate is then void.
  bool unsound = false;
  /// Add r * c / 2 to every bidder's loss bound. The corner evaluation is already exact, so
  /// this only widens the bound.
  bool lipschitz_margin = false;
  std::uint64_t grid_budget = 1'000'000;
  int threads = 1;
  CoreOptions core{};
  std::size_t cache_limit = 4'000'000;
};

struct BidderLoss {
  int bidder = 0;
  Rational epsilon;
  std::vector<Rational> worst_valuation;
  bool saturated = false;  ///< some best response bids v_max on a bundle
};

struct IterationReport {
  int iteration = 0;
  Rational epsilon;
  std::vector<BidderLoss> bidders;
  bool exact = true;
  std::size_t cached_outcomes = 0;
};

/// A strategy profile with a bound on every bidder's utility loss.
struct EpsilonCertificate {
  std::string domain;
  PaymentRule rule = PaymentRule::kProxy;
  Rational step;
  std::uint64_t seed = 0;
  bool exact = true;
  std::size_t samples = 0;  ///< zero in exact mode
  Rational margin;           ///< per-bidder margin already included in epsilon
  StrategyProfile profile;
  Rational epsilon;
  int best_iteration = 0;
  int iterations = 0;
  bool converged = false;
  bool unsound = false;
  std::vector<IterationReport> trace;
  std::vector<std::string> warnings;
};

/// Throws PreconditionViolation unless `rule` may be solved on `domain`: first-price and VCG
/// always, proxy and proportional when the domain declares them non-decreasing, and
/// anything when `unsound` is set.
void check_rule_allowed(const DomainConfig& domain, PaymentRule rule, bool unsound);

/// Truthful play rounded down to the grid for every bidder the domain does not mark truthful.
[[nodiscard]] StrategyProfile initial_profile(const DomainConfig& domain, const Rational& step);

/// Iterated best response. Iteration t computes best responses to s^{t-1} together with a
/// bound on the loss of s^{t-1}; the certificate holds the profile with the smallest bound.
/// Stops after max_iterations, once the bound reaches the target, or when an exactly evaluated
/// profile recurs.
[[nodiscard]] EpsilonCertificate solve(const DomainConfig& domain, const SolverConfig& config,
                                       const std::function<void(const IterationReport&)>& on_iteration = {});

/// Loss bound for one profile, i.e. a single evaluation step of the solver without
/// updating strategies. Returns the per-bidder losses and the best responses.
struct ProfileEvaluation {
  std::vector<BidderLoss> bidders;
  Rational epsilon;
  StrategyProfile best_responses;
  bool exact = true;
};
[[nodiscard]] ProfileEvaluation evaluate_profile(const DomainConfig& domain, const StrategyProfile& profile,
                                                 const SolverConfig& config, std::uint64_t sample_seed = 1);

struct VerifyConfig {
  PaymentRule rule = PaymentRule::kProxy;
  Rational step{1, 64};
  int refine = 4;  ///< dense bid grid spacing is step / refine
  std::size_t valuations = 200;
  std::uint64_t seed = 1;
  std::uint64_t exact_budget = 1'000'000;
  std::size_t samples = 100'000;
  int threads = 1;
  CoreOptions core{};
};

struct VerifyReport {
  Rational max_loss;
  int worst_bidder = -1;
  std::vector<Rational> worst_valuation;
  std::vector<Rational> current_bid;
  std::vector<Rational> best_bid;
  std::size_t valuations_checked = 0;
  std::size_t bids_per_valuation = 0;
};

/// Best response search on a dense bid grid for sampled valuations, computing expected
/// utilities directly from the tie sets. The result is a lower bound on the true loss.
[[nodiscard]] VerifyReport verify(const DomainConfig& domain, const StrategyProfile& profile, const VerifyConfig& config);

/// Same search for one bidder at the given valuations.
[[nodiscard]] VerifyReport verify_at(const DomainConfig& domain, const StrategyProfile& profile, int bidder,
                                     const std::vector<std::vector<Rational>>& valuations, const VerifyConfig& config);

}  // namespace cabne
