#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cabne/domains.hpp"
#include "cabne/errors.hpp"
#include "cabne/io.hpp"

namespace cabne {
namespace {

const std::string kData = CABNE_DATA_DIR;

TEST(Domains, LlgShape) {
  const DomainConfig d = build_llg();
  ASSERT_EQ(d.num_bidders(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(d.auction.num_bundles(i), 1);
  EXPECT_EQ(d.v_max(0, 0), Rational(1));
  EXPECT_EQ(d.v_max(2, 0), Rational(2));
  EXPECT_TRUE(d.truthful[2]);
  EXPECT_FALSE(d.truthful[0]);
  EXPECT_EQ(d.classes(), (std::vector<std::vector<int>>{{0, 1}, {2}}));
  EXPECT_TRUE(validate_domain(d).warnings.empty());
  EXPECT_FALSE(d.has_nested_bundles());
}

TEST(Domains, LlgFileRoundTrips) {
  EXPECT_EQ(load_domain(kData + "/llg.json"), build_llg());
  EXPECT_EQ(parse_domain(domain_to_json(build_llg())), build_llg());
}

TEST(Domains, LlllggLikeLoads) {
  const DomainConfig d = load_domain(kData + "/llllgg_like.json");
  EXPECT_EQ(d.num_bidders(), 6);
  EXPECT_EQ(d.auction.num_goods(), 8);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(d.auction.num_bundles(i), 2);
  EXPECT_EQ(d.classes().size(), 2U);
}

std::string nested_domain(const std::string& small, const std::string& big) {
  return R"({"schema_version": 1, "name": "nested", "goods": ["A", "B"],
    "bidders": [{"id": "1", "bundles": [["A"], ["A", "B"]], "priors": [)" +
         small + ", " + big + R"(]}]})";
}

TEST(Domains, NestedPriorsWarnOrFail) {
  const DomainConfig overlap = parse_domain(nested_domain("[0, 2]", "[1, 3]"));
  EXPECT_EQ(overlap.warnings.size(), 1U);
  EXPECT_TRUE(parse_domain(nested_domain("[0, 1]", "[1, 3]")).warnings.empty());
  EXPECT_THROW((void)parse_domain(nested_domain("[2, 3]", "[0, 1]")), InvalidInput);
}

TEST(Domains, RejectsMalformedConfigs) {
  EXPECT_THROW((void)parse_domain("{"), InvalidInput);
  EXPECT_THROW((void)parse_domain(R"({"schema_version": 2, "goods": [], "bidders": []})"), InvalidInput);
  EXPECT_THROW((void)parse_domain(nested_domain("[1, 1]", "[0, 3]")), InvalidInput);
  EXPECT_THROW((void)parse_domain(R"({"schema_version": 1, "goods": ["A"],
    "bidders": [{"id": "1", "bundles": [["A"]], "priors": [[0, 1], [0, 1]]}]})"),
               InvalidInput);
}

TEST(Domains, SamplesAreDeterministicAndInRange) {
  const DomainConfig d = build_llg();
  const auto a = sample_valuations(d, 5000, 42);
  const auto b = sample_valuations(d, 5000, 42);
  const auto longer = sample_valuations(d, 6000, 42);
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(a.value(s, i, 0), b.value(s, i, 0));
      EXPECT_EQ(a.value(s, i, 0), longer.value(s, i, 0));
      EXPECT_GE(a.value(s, i, 0), 0.0);
      EXPECT_LT(a.value(s, i, 0), i == 2 ? 2.0 : 1.0);
    }
  }
}

// The mean of n draws from U[0,2] has standard deviation sqrt(1/3 / n).
TEST(Domains, GlobalMeanWithinThreeSigma) {
  const std::size_t n = 200000;
  const auto s = sample_valuations(build_llg(), n, 9);
  double sum = 0;
  for (std::size_t t = 0; t < n; ++t) sum += s.value(t, 2, 0);
  const double sigma = std::sqrt(1.0 / 3.0 / static_cast<double>(n));
  EXPECT_NEAR(sum / static_cast<double>(n), 1.0, 3 * sigma);
}

TEST(Domains, SamplesRespectFreeDisposal) {
  for (const char* policy : {"resample", "clamp"}) {
    const std::string text = R"({"schema_version": 1, "goods": ["A", "B"], "free_disposal": ")" + std::string(policy) +
                             R"(", "bidders": [{"id": "1", "bundles": [["A"], ["A", "B"]], "priors": [[0, 2], [1, 3]]}]})";
    const DomainConfig d = parse_domain(text);
    const auto s = sample_valuations(d, 20000, 3);
    for (std::size_t t = 0; t < s.size(); ++t) EXPECT_LE(s.value(t, 0, 0), s.value(t, 0, 1));
  }
}

/// Expected utility of the global bidder over the tie set.
Rational global_utility(const AuctionInstance& inst, PaymentRule rule, const Rational& value, const BidProfile& b) {
  const auto ties = winner_determination(inst, b).allocations;
  Rational u;
  for (const auto& x : ties) {
    if (x[2] == kNoBundle) continue;
    u += value - compute_payments(rule, inst, b, x)[2];
  }
  return u / Rational(static_cast<std::int64_t>(ties.size()));
}

// Under core-selecting rules the global bidder in LLG faces a second-price auction against
// the locals' sum, so truthful bidding is dominant.
TEST(Domains, LlgGlobalTruthfulIsDominant) {
  const DomainConfig d = build_llg();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> local(0, 32);
  std::uniform_int_distribution<int> global(0, 64);
  for (const auto rule : {PaymentRule::kVcgNearest, PaymentRule::kProxy, PaymentRule::kProportional}) {
    for (int state = 0; state < 20; ++state) {
      const Rational v(global(rng), 32);
      BidProfile b(d.auction, {{Rational(local(rng), 32)}, {Rational(local(rng), 32)}, {v}});
      const Rational truthful = global_utility(d.auction, rule, v, b);
      for (int dev = 0; dev < 50; ++dev) {
        b.set(2, 0, Rational(global(rng), 32));
        EXPECT_LE(global_utility(d.auction, rule, v, b), truthful) << rule_name(rule);
      }
    }
  }
}

}  // namespace
}  // namespace cabne
