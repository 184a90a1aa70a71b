#include <gtest/gtest.h>

#include <random>

#include "cabne/errors.hpp"
#include "cabne/reference_cases.hpp"
#include "oracles.hpp"

namespace cabne {
namespace {

using testing::brute_force_wd;

TEST(AuctionInstance, RejectsMalformedInput) {
  EXPECT_THROW(AuctionInstance({"A", "A"}, {}), InvalidInput);
  EXPECT_THROW(AuctionInstance({"A"}, {{"x", {Bundle(0)}}}), InvalidInput);
  EXPECT_THROW(AuctionInstance({"A"}, {{"x", {Bundle(2)}}}), InvalidInput);
  EXPECT_THROW(AuctionInstance({"A"}, {{"x", {Bundle(1)}}, {"x", {Bundle(1)}}}), InvalidInput);
  const auto inst = AuctionInstance::from_names({"A", "B"}, {{"x", {{"A"}, {"A", "B"}}}});
  EXPECT_EQ(inst.bundle_label(inst.bundle(0, 1)), "{A,B}");
  EXPECT_EQ(inst.bundle_label(inst.bundle(0, kNoBundle)), "{}");
  EXPECT_THROW(BidProfile(inst, {{Rational(-1), Rational(1)}}), InvalidInput);
  EXPECT_THROW(BidProfile(inst, {{Rational(1)}}), InvalidInput);
}

TEST(WinnerDetermination, FirstReferenceCaseHasUniqueWinners) {
  for (const bool raised : {false, true}) {
    const auto c = table1_case(raised);
    const auto wd = winner_determination(c.instance, c.bids);
    EXPECT_EQ(wd.welfare, Rational(8));
    ASSERT_EQ(wd.allocations.size(), 1U);
    EXPECT_EQ(wd.allocations[0], (Allocation{{0, 0, kNoBundle}}));
  }
}

TEST(WinnerDetermination, ReturnsEveryTiedAllocation) {
  const auto inst = AuctionInstance::from_names({"A", "B"}, {{"1", {{"A"}}}, {"2", {{"A"}}}, {"3", {{"B"}}}});
  const BidProfile b(inst, {{1}, {1}, {2}});
  const auto wd = winner_determination(inst, b);
  EXPECT_EQ(wd.welfare, Rational(3));
  ASSERT_EQ(wd.allocations.size(), 2U);
  EXPECT_EQ(wd.allocations[0], (Allocation{{kNoBundle, 0, 0}}));
  EXPECT_EQ(wd.allocations[1], (Allocation{{0, kNoBundle, 0}}));
}

TEST(WinnerDetermination, ZeroBidsWinNothingUnlessEligible) {
  const auto inst = AuctionInstance::from_names({"A"}, {{"1", {{"A"}}}, {"2", {{"A"}}}});
  const auto zeros = BidProfile::zeros(inst);
  const auto wd = winner_determination(inst, zeros);
  ASSERT_EQ(wd.allocations.size(), 1U);
  EXPECT_EQ(wd.allocations[0], Allocation::empty(2));

  WdOptions opts;
  opts.zero_bid_eligible = BidderSet::single(1);
  const auto with_zero = winner_determination(inst, zeros, opts);
  ASSERT_EQ(with_zero.allocations.size(), 2U);
  EXPECT_EQ(with_zero.allocations[0], (Allocation{{kNoBundle, kNoBundle}}));
  EXPECT_EQ(with_zero.allocations[1], (Allocation{{kNoBundle, 0}}));
}

TEST(WinnerDetermination, ConstrainedAndCoalitionVariants) {
  const auto c = table1_case(false);
  // Bidder 3 forced onto {1,2}: nobody else can win.
  const auto forced = constrained_winner_determination(c.instance, 2, 2, c.bids);
  EXPECT_EQ(forced.welfare, Rational(0));
  ASSERT_EQ(forced.allocations.size(), 1U);
  EXPECT_EQ(forced.allocations[0], (Allocation{{kNoBundle, kNoBundle, 2}}));
  // Bidder 1 forced out: best of {2,3} is 6, reached two ways.
  const auto out = constrained_winner_determination(c.instance, 0, kNoBundle, c.bids);
  EXPECT_EQ(out.welfare, Rational(6));
  EXPECT_EQ(out.allocations.size(), 2U);
  EXPECT_EQ(coalition_welfare(c.instance, BidderSet(0b011), c.bids), Rational(8));
  EXPECT_EQ(coalition_welfare(c.instance, BidderSet(0b110), c.bids), Rational(6));
  EXPECT_THROW((void)coalition_winner_determination(c.instance, BidderSet{}, c.bids), PreconditionViolation);
}

TEST(WinnerDetermination, NodeBudgetIsEnforced) {
  std::mt19937_64 rng(3);
  const auto inst = testing::random_instance(rng, 10, 8, 3);
  const auto b = testing::random_bids(rng, inst, 20);
  WdOptions opts;
  opts.node_budget = 3;
  EXPECT_THROW((void)winner_determination(inst, b, opts), BudgetExceeded);
}

// Property: branch-and-bound tie sets equal brute-force enumeration, across full,
// constrained, coalition, and zero-eligible variants.
TEST(WinnerDetermination, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int m = 2 + static_cast<int>(rng() % 4);
    const auto inst = testing::random_instance(rng, n, m, 3);
    const auto b = testing::random_bids(rng, inst, 4);
    const std::uint64_t all = inst.all_goods().mask();
    const BidderSet everyone = inst.all_bidders();

    const auto fast = winner_determination(inst, b);
    const auto slow = brute_force_wd(inst, b, everyone, all);
    ASSERT_EQ(fast.welfare, slow.welfare);
    ASSERT_EQ(fast.allocations, slow.allocations);

    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    WdOptions opts;
    opts.zero_bid_eligible = BidderSet::single(i);
    ASSERT_EQ(winner_determination(inst, b, opts).allocations,
              brute_force_wd(inst, b, everyone, all, BidderSet::single(i)).allocations);

    for (int k = kNoBundle; k < inst.num_bundles(i); ++k) {
      const auto con = constrained_winner_determination(inst, i, k, b);
      auto expect = brute_force_wd(inst, b, everyone.without(i), all & ~inst.bundle(i, k).mask());
      for (auto& x : expect.allocations) x.choice[static_cast<std::size_t>(i)] = k;
      std::sort(expect.allocations.begin(), expect.allocations.end());
      ASSERT_EQ(con.welfare, expect.welfare);
      ASSERT_EQ(con.allocations, expect.allocations);
    }

    const BidderSet coalition(1 + rng() % (everyone.mask()));
    const auto coal = coalition_winner_determination(inst, coalition, b);
    const auto coal_slow = brute_force_wd(inst, b, coalition, all);
    ASSERT_EQ(coal.welfare, coal_slow.welfare);
    ASSERT_EQ(coal.allocations, coal_slow.allocations);
    ASSERT_EQ(coalition_welfare(inst, coalition, b), coal_slow.welfare);
  }
}

}  // namespace
}  // namespace cabne
