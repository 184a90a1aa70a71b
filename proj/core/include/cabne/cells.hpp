#pragma once

#include <optional>
#include <vector>

#include "cabne/auction.hpp"

namespace cabne {

/// y_a - y_b >= bound over bidder i's bids. Index r (the bidder's bundle count) stands for
/// the empty bundle, whose bid is fixed at zero.
struct DifferenceConstraint {
  int a = 0;
  int b = 0;
  Rational bound;
};

/// Closure of the set of own bids for which bidder i's bundle under each opponent profile
/// is the given choice. A convex polyhedron described by difference constraints.
struct BidCell {
  int bidder = 0;
  int dimension = 0;
  std::vector<int> choices;  ///< per opponent profile; kNoBundle allowed
  std::vector<DifferenceConstraint> constraints;

  [[nodiscard]] bool contains(const std::vector<Rational>& y) const;
};

/// Welfare of the other bidders when bidder i is fixed to each bundle: index k < r for
/// bundle k, index r for the empty bundle. The bidder's own row of `bids` is ignored.
[[nodiscard]] std::vector<Rational> others_welfare(const AuctionInstance& instance, int bidder, const BidProfile& bids);

[[nodiscard]] BidCell bid_cell(const AuctionInstance& instance, int bidder, const std::vector<BidProfile>& opponents,
                               const std::vector<int>& choices);

/// Least non-negative point of the cell by longest-path relaxation; nullopt when empty.
[[nodiscard]] std::optional<std::vector<Rational>> pareto_point(const BidCell& cell);

/// Coordinatewise minima of the cell from one LP per coordinate; nullopt when empty.
[[nodiscard]] std::optional<std::vector<Rational>> coordinate_minima(const BidCell& cell);

/// For each opponent profile, the sorted set of bidder i's choices over the tie set when i
/// bids `own`.
[[nodiscard]] std::vector<std::vector<int>> choice_signature(const AuctionInstance& instance, int bidder,
                                                             const std::vector<BidProfile>& opponents,
                                                             const std::vector<Rational>& own);

/// Scans coordinate `axis` of `start` over [0, steps * step]. Returns the cells j of width
/// `step` whose interior points j*step + step*{1/4, 1/2, 3/4} do not all share one
/// signature, i.e. where the allocation changes off the grid.
[[nodiscard]] std::vector<int> off_grid_changes(const AuctionInstance& instance, int bidder,
                                                const std::vector<BidProfile>& opponents, std::vector<Rational> start,
                                                int axis, const Rational& step, int steps);

}  // namespace cabne
