#include "cabne/cells.hpp"

#include <algorithm>
#include <set>

#include "cabne/errors.hpp"
#include "cabne/linear_program.hpp"

namespace cabne {

namespace {

const Rational& coord(const std::vector<Rational>& y, int k, int r) {
  static const Rational zero;
  return k == r ? zero : y[static_cast<std::size_t>(k)];
}

}  // namespace

bool BidCell::contains(const std::vector<Rational>& y) const {
  if (static_cast<int>(y.size()) != dimension) return false;
  for (const auto& v : y) {
    if (v.sign() < 0) return false;
  }
  for (const auto& c : constraints) {
    if (coord(y, c.a, dimension) - coord(y, c.b, dimension) < c.bound) return false;
  }
  return true;
}

std::vector<Rational> others_welfare(const AuctionInstance& instance, int bidder, const BidProfile& bids) {
  const int r = instance.num_bundles(bidder);
  std::vector<Rational> w;
  for (int k = 0; k < r; ++k) w.push_back(constrained_winner_determination(instance, bidder, k, bids).welfare);
  w.push_back(constrained_winner_determination(instance, bidder, kNoBundle, bids).welfare);
  return w;
}

BidCell bid_cell(const AuctionInstance& instance, int bidder, const std::vector<BidProfile>& opponents,
                 const std::vector<int>& choices) {
  if (opponents.size() != choices.size()) throw InvalidInput("one choice per opponent profile is required");
  const int r = instance.num_bundles(bidder);
  BidCell cell;
  cell.bidder = bidder;
  cell.dimension = r;
  cell.choices = choices;
  for (std::size_t p = 0; p < opponents.size(); ++p) {
    const auto w = others_welfare(instance, bidder, opponents[p]);
    const int k = choices[p] == kNoBundle ? r : choices[p];
    if (k < 0 || k > r) throw InvalidInput("choice out of range");
    // Choice k is efficient: y_k + W(k) >= y_k' + W(k') for every other k'.
    for (int other = 0; other <= r; ++other) {
      if (other == k) continue;
      cell.constraints.push_back({k, other, w[static_cast<std::size_t>(other)] - w[static_cast<std::size_t>(k)]});
    }
  }
  return cell;
}

std::optional<std::vector<Rational>> pareto_point(const BidCell& cell) {
  const int r = cell.dimension;
  std::vector<Rational> y(static_cast<std::size_t>(r));
  // Lower bounds y_a >= y_b + bound propagate along paths; a change after r + 1 rounds
  // means a positive cycle.
  bool changed = true;
  for (int round = 0; changed; ++round) {
    if (round > r + 1) return std::nullopt;
    changed = false;
    for (const auto& c : cell.constraints) {
      if (c.a == r) continue;
      const Rational need = coord(y, c.b, r) + c.bound;
      if (y[static_cast<std::size_t>(c.a)] < need) {
        y[static_cast<std::size_t>(c.a)] = need;
        changed = true;
      }
    }
  }
  if (!cell.contains(y)) return std::nullopt;
  return y;
}

std::optional<std::vector<Rational>> coordinate_minima(const BidCell& cell) {
  const int r = cell.dimension;
  LinearProgram lp;
  lp.c.assign(static_cast<std::size_t>(r), Rational{});
  // y_a - y_b >= bound  <=>  -y_a + y_b <= -bound, with the empty bundle's term dropped.
  for (const auto& c : cell.constraints) {
    std::vector<Rational> row(static_cast<std::size_t>(r));
    if (c.a != r) row[static_cast<std::size_t>(c.a)] -= 1;
    if (c.b != r) row[static_cast<std::size_t>(c.b)] += 1;
    lp.a.push_back(std::move(row));
    lp.b.push_back(-c.bound);
  }
  std::vector<Rational> out;
  for (int k = 0; k < r; ++k) {
    std::fill(lp.c.begin(), lp.c.end(), Rational{});
    lp.c[static_cast<std::size_t>(k)] = -1;
    const LpSolution sol = maximize(lp);
    if (sol.status != LpStatus::kOptimal) return std::nullopt;
    out.push_back(-sol.objective);
  }
  return out;
}

std::vector<std::vector<int>> choice_signature(const AuctionInstance& instance, int bidder,
                                               const std::vector<BidProfile>& opponents,
                                               const std::vector<Rational>& own) {
  std::vector<std::vector<int>> out;
  for (const auto& b : opponents) {
    BidProfile full = b;
    full.set_bids_of(bidder, own);
    std::set<int> seen;
    for (const auto& x : winner_determination(instance, full).allocations) seen.insert(x[bidder]);
    out.emplace_back(seen.begin(), seen.end());
  }
  return out;
}

std::vector<int> off_grid_changes(const AuctionInstance& instance, int bidder, const std::vector<BidProfile>& opponents,
                                  std::vector<Rational> start, int axis, const Rational& step, int steps) {
  std::vector<int> out;
  for (int j = 0; j < steps; ++j) {
    std::vector<std::vector<std::vector<int>>> seen;
    for (const Rational& q : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      start[static_cast<std::size_t>(axis)] = step * (Rational(j) + q);
      seen.push_back(choice_signature(instance, bidder, opponents, start));
    }
    if (seen[0] != seen[1] || seen[1] != seen[2]) out.push_back(j);
  }
  return out;
}

}  // namespace cabne
