#include <gtest/gtest.h>

#include <random>

#include "cabne/bne.hpp"
#include "cabne/errors.hpp"

namespace cabne {
namespace {

const std::string kData = CABNE_DATA_DIR;

SolverConfig small_config(PaymentRule rule) {
  SolverConfig c;
  c.rule = rule;
  c.step = Rational(1, 8);
  c.max_iterations = 6;
  c.threads = 2;
  return c;
}

TEST(Bne, VertexBidsCoverTheGrid) {
  EXPECT_EQ(cell_vertex_bids({1, 1}, Rational(1, 64)).size(), 4225U);
  const auto two = cell_vertex_bids({1}, 1);
  EXPECT_EQ(two, (std::vector<std::vector<Rational>>{{0}, {1}}));
  const auto mixed = cell_vertex_bids({Rational(1, 2), 1}, Rational(1, 2));
  EXPECT_EQ(mixed, (std::vector<std::vector<Rational>>{{0, 0}, {0, Rational(1, 2)}, {0, 1},
                                                       {Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2)},
                                                       {Rational(1, 2), 1}}));
  EXPECT_THROW((void)cell_vertex_bids({1, 1}, Rational(1, 64), 1000), BudgetExceeded);
}

TEST(Bne, RuleGating) {
  const DomainConfig llg = build_llg();
  const DomainConfig wide = load_domain(kData + "/llllgg_like.json");
  EXPECT_NO_THROW(check_rule_allowed(llg, PaymentRule::kProxy, false));
  EXPECT_NO_THROW(check_rule_allowed(wide, PaymentRule::kFirstPrice, false));
  EXPECT_NO_THROW(check_rule_allowed(wide, PaymentRule::kVcg, false));
  EXPECT_THROW(check_rule_allowed(llg, PaymentRule::kVcgNearest, false), PreconditionViolation);
  EXPECT_THROW(check_rule_allowed(wide, PaymentRule::kProxy, false), PreconditionViolation);
  EXPECT_THROW(check_rule_allowed(wide, PaymentRule::kProportional, false), PreconditionViolation);
  EXPECT_NO_THROW(check_rule_allowed(wide, PaymentRule::kProxy, true));
  EXPECT_THROW((void)solve(llg, small_config(PaymentRule::kVcgNearest)), PreconditionViolation);

  SolverConfig c = small_config(PaymentRule::kVcgNearest);
  c.unsound = true;
  c.max_iterations = 2;
  const auto cert = solve(llg, c);
  EXPECT_TRUE(cert.unsound);
  EXPECT_FALSE(cert.warnings.empty());
}

// Alone in a first-price auction, any positive bid wins, so the best response is the
// smallest positive grid bid whenever that is profitable.
TEST(Bne, LoneFirstPriceBidderBidsOneStep) {
  const DomainConfig d = parse_domain(R"({"schema_version": 1, "name": "alone", "goods": ["A"],
    "bidders": [{"id": "1", "bundles": [["A"]], "priors": [[0, 1]]}]})");
  SolverConfig c = small_config(PaymentRule::kFirstPrice);
  c.target_epsilon = Rational(1, 8);
  c.max_iterations = 4;
  const auto cert = solve(d, c);
  const auto& s = std::get<PiecewiseConstantStrategy>(cert.profile[0]);
  for (std::size_t cell = 1; cell < s.num_cells(); ++cell) EXPECT_EQ(s.bid(cell)[0], Rational(1, 8));
  EXPECT_TRUE(cert.converged);
  // Bidding 1/8 forgoes at most the step itself.
  EXPECT_LE(cert.epsilon, Rational(1, 8));
}

TEST(Bne, SmallLlgCertificateBoundsMeasuredLoss) {
  const DomainConfig d = build_llg();
  for (const auto rule : {PaymentRule::kProxy, PaymentRule::kProportional}) {
    const auto cert = solve(d, small_config(rule));
    ASSERT_FALSE(cert.trace.empty());
    EXPECT_TRUE(cert.exact);
    Rational least = cert.trace[0].epsilon;
    for (const auto& it : cert.trace) least = min(least, it.epsilon);
    EXPECT_EQ(cert.epsilon, least);
    EXPECT_EQ(cert.trace[static_cast<std::size_t>(cert.best_iteration - 1)].epsilon, cert.epsilon);
    EXPECT_TRUE(std::holds_alternative<TruthfulStrategy>(cert.profile[2]));
    EXPECT_EQ(cert.profile[0], cert.profile[1]);

    VerifyConfig v;
    v.rule = rule;
    v.step = cert.step;
    v.valuations = 40;
    v.threads = 2;
    const auto report = verify(d, cert.profile, v);
    // One representative of the symmetric locals; the global is truthful.
    EXPECT_EQ(report.valuations_checked, 40U);
    EXPECT_EQ(report.bids_per_valuation, 33U);
    EXPECT_GE(report.max_loss.sign(), 0);
    EXPECT_LE(report.max_loss, cert.epsilon) << rule_name(rule);

    // Re-evaluating the certified profile reproduces its bound.
    EXPECT_EQ(evaluate_profile(d, cert.profile, small_config(rule)).epsilon, cert.epsilon);
  }
}

TEST(Bne, SolverIsDeterministicAcrossThreadCounts) {
  const DomainConfig d = build_llg();
  SolverConfig a = small_config(PaymentRule::kProxy);
  SolverConfig b = a;
  b.threads = 1;
  const auto x = solve(d, a);
  const auto y = solve(d, b);
  EXPECT_EQ(x.profile, y.profile);
  EXPECT_EQ(x.epsilon, y.epsilon);
  EXPECT_EQ(x.iterations, y.iterations);
}

TEST(Bne, SamplingModeAgreesRoughlyWithExact) {
  const DomainConfig d = build_llg();
  SolverConfig c = small_config(PaymentRule::kProxy);
  c.force_sampling = true;
  c.samples = 20000;
  const auto sampled = solve(d, c);
  EXPECT_FALSE(sampled.exact);
  EXPECT_EQ(sampled.samples, 20000U);
  const auto exact = solve(d, small_config(PaymentRule::kProxy));
  EXPECT_NEAR(sampled.epsilon.to_double(), exact.epsilon.to_double(), 0.02);
}

TEST(Bne, CorruptedProfileShowsLoss) {
  const DomainConfig d = build_llg();
  auto cert = solve(d, small_config(PaymentRule::kProxy));
  auto s = std::get<PiecewiseConstantStrategy>(cert.profile[0]);
  const std::size_t top = s.num_cells() - 1;
  s.set_bid(top, {0});
  StrategyProfile broken = cert.profile;
  broken[0] = s;
  VerifyConfig v;
  v.step = cert.step;
  const auto report = verify_at(d, broken, 0, {{Rational(15, 16)}}, v);
  // Bidding zero never wins; some positive bid earns at least a quarter against this field.
  EXPECT_GT(report.max_loss, Rational(1, 4));
  EXPECT_EQ(report.current_bid, std::vector<Rational>{0});
  EXPECT_GT(evaluate_profile(d, broken, small_config(PaymentRule::kProxy)).epsilon, cert.epsilon);
}

TEST(Bne, MarginWidensTheBound) {
  const DomainConfig d = build_llg();
  SolverConfig c = small_config(PaymentRule::kProxy);
  c.max_iterations = 2;
  const auto plain = solve(d, c);
  c.lipschitz_margin = true;
  const auto wide = solve(d, c);
  EXPECT_EQ(wide.margin, Rational(1, 16));
  EXPECT_EQ(wide.epsilon, plain.epsilon + Rational(1, 16));
}

// For every valuation some vertex's i-optimal utility beats every bid, including interior
// ones off the grid.
TEST(Bne, VertexBoundDominatesInteriorBids) {
  DomainConfig d = build_llg();
  d.truthful = {false, false, false};
  const Rational c(1, 8);
  StrategyProfile profile{truthful_rounded(d.priors[0], c, Rounding::kDown),
                          truthful_rounded(d.priors[1], c, Rounding::kDown),
                          truthful_rounded(d.priors[2], c, Rounding::kDown)};
  std::get<PiecewiseConstantStrategy>(profile[1]).set_bid(3, {Rational(5, 8)});
  const auto dist = exact_opponent_distribution(d, 0, profile);
  const auto vertices = cell_vertex_bids({1}, c);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick(0, 1000);
  for (const auto rule : {PaymentRule::kFirstPrice, PaymentRule::kVcg, PaymentRule::kProxy, PaymentRule::kProportional}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<Rational> v{Rational(pick(rng), 1000)};
      Rational bound = i_optimal_utility(d.auction, rule, 0, v, vertices[0], dist);
      for (const auto& vx : vertices) bound = max(bound, i_optimal_utility(d.auction, rule, 0, v, vx, dist));
      for (int k = 0; k < 25; ++k) {
        const std::vector<Rational> b{Rational(2 * pick(rng) + 1, 2001)};
        EXPECT_LE(utility_plane(d.auction, rule, 0, b, dist).value(v), bound) << rule_name(rule);
      }
    }
  }
}

}  // namespace
}  // namespace cabne
