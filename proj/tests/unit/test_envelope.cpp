#include <gtest/gtest.h>

#include <random>

#include "cabne/envelope.hpp"

namespace cabne {
namespace {

UtilityPlane plane(std::vector<Rational> bid, std::vector<Rational> win, Rational pay) {
  UtilityPlane p;
  p.bid = std::move(bid);
  p.win_prob = std::move(win);
  p.expected_payment = std::move(pay);
  p.refresh_double();
  return p;
}

Rational brute_max(const std::vector<UtilityPlane>& planes, const std::vector<Rational>& v) {
  Rational best = planes[0].value(v);
  for (const auto& p : planes) best = max(best, p.value(v));
  return best;
}

std::vector<UtilityPlane> random_lines(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> unit(0, 64);
  std::vector<UtilityPlane> out;
  for (int i = 0; i < count; ++i) {
    const Rational slope(unit(rng), 64);
    out.push_back(plane({Rational(i, 64)}, {slope}, slope * Rational(unit(rng), 64)));
  }
  return out;
}

TEST(Envelope, SinglePlaneIsOneSegment) {
  const LineEnvelope env({plane({Rational(1, 2)}, {Rational(1, 2)}, Rational(1, 8))}, 0, 1);
  ASSERT_EQ(env.segments().size(), 1U);
  EXPECT_TRUE(env.breakpoints().empty());
  EXPECT_EQ(env.value(1), Rational(3, 8));
  EXPECT_EQ(env.argmax(Rational(1, 3)), 0U);
}

TEST(Envelope, TwoLinesCrossAtTheirIntersection) {
  // 0 against v - 1/3: they cross at v = 1/3 and the steeper line owns the breakpoint.
  const std::vector<UtilityPlane> planes{plane({0}, {0}, 0), plane({Rational(1, 3)}, {1}, Rational(1, 3))};
  const LineEnvelope env(planes, 0, 1);
  EXPECT_EQ(env.breakpoints(), std::vector<Rational>{Rational(1, 3)});
  EXPECT_EQ(env.argmax(Rational(1, 4)), 0U);
  EXPECT_EQ(env.argmax(Rational(1, 3)), 1U);
  EXPECT_EQ(env.value(1), Rational(2, 3));

  const auto s = induce_strategy(env, planes);
  EXPECT_EQ(s.edges()[0], (std::vector<Rational>{0, Rational(1, 3), 1}));
  EXPECT_EQ(s.at({Rational(1, 5)}), std::vector<Rational>{0});
  EXPECT_EQ(s.at({Rational(1, 2)}), std::vector<Rational>{Rational(1, 3)});
}

TEST(Envelope, RandomLinesMatchBruteForce) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto planes = random_lines(rng, 100);
    const LineEnvelope env(planes, 0, 1);
    const auto& seg = env.segments();
    EXPECT_EQ(seg.front().from, Rational(0));
    EXPECT_EQ(seg.back().to, Rational(1));
    for (std::size_t k = 1; k < seg.size(); ++k) {
      EXPECT_EQ(seg[k].from, seg[k - 1].to);
      EXPECT_GT(planes[seg[k].plane].win_prob[0], planes[seg[k - 1].plane].win_prob[0]);
    }
    std::vector<Rational> probes = env.breakpoints();
    for (int j = 0; j <= 97; ++j) probes.emplace_back(j, 97);
    for (const auto& v : probes) {
      const Rational best = brute_max(planes, {v});
      EXPECT_EQ(env.value(v), best);
      EXPECT_EQ(planes[env.argmax(v)].value({v}), best);
      EXPECT_EQ(planes[argmax_plane(planes, {v})].value({v}), best);
    }
  }
}

TEST(Envelope, ArgmaxBreaksExactTiesByIndexAndResolvesNearTies) {
  const auto a = plane({0}, {Rational(1, 2)}, Rational(1, 4));
  EXPECT_EQ(argmax_plane({a, a}, {Rational(1, 2)}), 0U);
  // Differ by 1e-18, far below double resolution at this magnitude.
  const auto b = plane({1}, {Rational(1, 2)}, Rational(1, 4) - Rational(1, 1'000'000'000'000'000'000));
  EXPECT_EQ(argmax_plane({a, b}, {Rational(1, 2)}), 1U);
}

std::vector<UtilityPlane> random_planes(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> unit(0, 32);
  std::vector<UtilityPlane> out;
  for (int i = 0; i < count; ++i) {
    Rational w0(unit(rng), 64);
    Rational w1(unit(rng), 64);
    out.push_back(plane({Rational(i, 8), Rational(i % 3, 8)}, {w0, w1}, Rational(unit(rng), 64)));
  }
  return out;
}

TEST(Envelope, GridEnvelopeMatchesBruteForce) {
  std::mt19937_64 rng(6);
  const auto planes = random_planes(rng, 40);
  const std::vector<UniformPrior> box{{0, 1}, {0, 2}};
  const UpperEnvelope env(planes, box, Rational(1, 8), 3);
  ASSERT_TRUE(env.grid().has_value());
  EXPECT_FALSE(env.line().has_value());
  EXPECT_EQ(env.lipschitz_margin(), Rational(1, 8));
  const auto& g = *env.grid();
  EXPECT_EQ(g.num_points(), 9U * 17U);
  for (std::size_t p = 0; p < g.num_points(); ++p) {
    EXPECT_EQ(g.value[p], brute_max(planes, g.point(p)));
    EXPECT_EQ(planes[g.argmax[p]].value(g.point(p)), g.value[p]);
  }
  const UpperEnvelope line(random_lines(rng, 10), {{0, 1}}, Rational(1, 8));
  EXPECT_TRUE(line.line().has_value());
  EXPECT_EQ(line.lipschitz_margin(), Rational(0));
}

// Replaying the induced bids at each cell midpoint does at least as well as any other plane.
TEST(Envelope, GridInducedStrategyIsPointwiseBest) {
  std::mt19937_64 rng(12);
  const auto planes = random_planes(rng, 30);
  const std::vector<UniformPrior> box{{0, 1}, {0, 1}};
  const auto s = induce_strategy(planes, box, Rational(1, 16), 2);
  ASSERT_EQ(s.num_cells(), 256U);
  for (std::size_t c = 0; c < s.num_cells(); ++c) {
    const auto mid = s.midpoint(c);
    const Rational chosen = planes[argmax_plane(planes, mid)].value(mid);
    for (const auto& p : planes) EXPECT_LE(p.value(mid), chosen);
    EXPECT_EQ(s.bid(c), planes[argmax_plane(planes, mid)].bid);
  }
}

TEST(Envelope, InducedStrategyIgnoresPositiveScaling) {
  std::mt19937_64 rng(13);
  auto planes = random_planes(rng, 25);
  const std::vector<UniformPrior> box{{0, 1}, {0, 1}};
  const auto before = induce_strategy(planes, box, Rational(1, 8));
  for (auto& p : planes) {
    for (auto& w : p.win_prob) w *= Rational(3, 7);
    p.expected_payment *= Rational(3, 7);
    p.refresh_double();
  }
  EXPECT_EQ(induce_strategy(planes, box, Rational(1, 8)), before);
  const auto line = random_lines(rng, 30);
  const LineEnvelope env(line, 0, 1);
  EXPECT_EQ(induce_strategy(env, line).num_cells(), env.segments().size() - [&] {
    // Adjacent segments with equal bids merge into one cell.
    std::size_t merged = 0;
    for (std::size_t k = 1; k < env.segments().size(); ++k) {
      merged += line[env.segments()[k].plane].bid == line[env.segments()[k - 1].plane].bid;
    }
    return merged;
  }());
}

}  // namespace
}  // namespace cabne
