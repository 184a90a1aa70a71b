#include <gtest/gtest.h>

#include "cabne/errors.hpp"
#include "cabne/monotonicity.hpp"
#include "cabne/reference_cases.hpp"

namespace cabne {
namespace {

Allocation efficient(const AuctionCase& c) { return winner_determination(c.instance, c.bids).allocations.front(); }

TEST(Monotonicity, FirstTableRaiseIsAViolationForVcgNearest) {
  const auto base = table1_case(false);
  const auto probe = MonotonicityProbe::single(base.instance, base.bids, 1, 1, Rational(7), efficient(base));
  const auto cert = check_probe(PaymentRule::kVcgNearest, probe);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->payment_before, Rational(3));
  EXPECT_EQ(cert->payment_after, Rational(5, 2));
  EXPECT_FALSE(check_probe(PaymentRule::kVcg, probe).has_value());
  EXPECT_FALSE(check_probe(PaymentRule::kFirstPrice, probe).has_value());
}

TEST(Monotonicity, CorrigendumRaiseIsAViolationForProportionalAndProxy) {
  const auto base = corrigendum_case(false);
  const auto probe = MonotonicityProbe::single(base.instance, base.bids, 0, 0, Rational(15), efficient(base));
  const auto prop = check_probe(PaymentRule::kProportional, probe);
  ASSERT_TRUE(prop.has_value());
  EXPECT_EQ(prop->payment_before, Rational(8));
  EXPECT_EQ(prop->payment_after, Rational(5));
  const auto px = check_probe(PaymentRule::kProxy, probe);
  ASSERT_TRUE(px.has_value());
  EXPECT_EQ(px->payment_after, Rational(3));
}

TEST(Monotonicity, RejectsInvalidProbes) {
  const auto base = table1_case(false);
  const Allocation x = efficient(base);
  EXPECT_THROW((void)check_probe(PaymentRule::kVcg, MonotonicityProbe::single(base.instance, base.bids, 0, 0, 3, x)),
               InvalidProbe);
  EXPECT_THROW((void)check_probe(PaymentRule::kVcg, MonotonicityProbe::single(base.instance, base.bids, 0, 0, 4, x)),
               InvalidProbe);
  // Raising bidder 3's {1,2} bid to 9 makes the shared allocation inefficient.
  EXPECT_THROW((void)check_probe(PaymentRule::kVcg, MonotonicityProbe::single(base.instance, base.bids, 2, 2, 9, x)),
               InvalidProbe);
}

TEST(Monotonicity, ProbesKeepTheAllocationEfficient) {
  std::mt19937_64 rng(5);
  const auto gen = random_family(2, 4, 3, 3, 10);
  for (int t = 0; t < 40; ++t) {
    const auto pi = gen(rng);
    for (const auto& p : probes_for(pi.instance, pi.bids, true)) {
      const BidProfile after = p.raised_profile();
      EXPECT_EQ(reported_welfare(p.instance, after, p.allocation), winner_determination(p.instance, after).welfare);
      for (std::size_t k = 0; k < p.raised.size(); ++k) EXPECT_LE(p.base.bids_of(p.bidder)[k], p.raised[k]);
    }
  }
}

TEST(Monotonicity, FirstPriceAndVcgHaveNoViolations) {
  SearchOptions opt;
  opt.probe_budget = 3000;
  opt.multi_coordinate = true;
  for (const auto rule : {PaymentRule::kFirstPrice, PaymentRule::kVcg}) {
    const auto r = search_violations(rule, random_family(2, 4, 3, 3, 10), opt);
    EXPECT_EQ(r.probes_checked, opt.probe_budget);
    EXPECT_TRUE(r.certificates.empty()) << rule_name(rule);
  }
}

TEST(Monotonicity, FamiliesRediscoverKnownViolations) {
  SearchOptions opt;
  opt.probe_budget = 20000;
  const auto nearest = search_violations(PaymentRule::kVcgNearest, three_bidder_two_good_family(), opt);
  EXPECT_FALSE(nearest.certificates.empty());
  const auto prop = search_violations(PaymentRule::kProportional, two_bidder_two_good_family(), opt);
  EXPECT_FALSE(prop.certificates.empty());
  for (const auto& c : prop.certificates) EXPECT_LT(c.payment_after, c.payment_before);
}

TEST(Monotonicity, SearchIsIndependentOfThreadCount) {
  SearchOptions one;
  one.probe_budget = 4000;
  SearchOptions four = one;
  four.threads = 4;
  const auto a = search_violations(PaymentRule::kVcgNearest, three_bidder_two_good_family(), one);
  const auto b = search_violations(PaymentRule::kVcgNearest, three_bidder_two_good_family(), four);
  ASSERT_EQ(a.certificates.size(), b.certificates.size());
  EXPECT_EQ(a.probes_checked, b.probes_checked);
  for (std::size_t k = 0; k < a.certificates.size(); ++k) {
    EXPECT_EQ(a.certificates[k].probe.base, b.certificates[k].probe.base);
    EXPECT_EQ(a.certificates[k].payment_after, b.certificates[k].payment_after);
  }
}

TEST(Monotonicity, MinimizedCertificatesStillViolateAndDoNotGrow) {
  SearchOptions opt;
  opt.probe_budget = 20000;
  const auto found = search_violations(PaymentRule::kVcgNearest, random_family(3, 4, 3, 3, 10), opt);
  ASSERT_FALSE(found.certificates.empty());
  for (std::size_t k = 0; k < std::min<std::size_t>(5, found.certificates.size()); ++k) {
    const auto& c = found.certificates[k];
    const auto m = minimize_certificate(c);
    EXPECT_LE(m.probe.instance.num_bidders(), c.probe.instance.num_bidders());
    EXPECT_LE(m.probe.instance.num_goods(), c.probe.instance.num_goods());
    const auto again = check_probe(m.rule, m.probe);
    ASSERT_TRUE(again.has_value());
    EXPECT_LT(again->payment_after, again->payment_before);
  }
}

}  // namespace
}  // namespace cabne
