#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cabne/domains.hpp"
#include "cabne/rational.hpp"

namespace cabne {

/// Map from valuations to bids that is constant on the cells of a rectilinear grid.
/// Dimension k has breakpoints e_0 < ... < e_m; cell j covers [e_j, e_{j+1}), the last one
/// closed. Cells are stored row-major with the last dimension fastest.
class PiecewiseConstantStrategy {
 public:
  PiecewiseConstantStrategy() = default;
  PiecewiseConstantStrategy(std::vector<std::vector<Rational>> edges, std::vector<std::vector<Rational>> bids);

  /// Cells of width `step` from lo to hi in every dimension (the last cell may be shorter),
  /// all bidding zero.
  static PiecewiseConstantStrategy grid(const std::vector<UniformPrior>& box, const Rational& step);

  [[nodiscard]] int dimension() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] std::size_t num_cells() const { return bids_.size(); }
  [[nodiscard]] const std::vector<std::vector<Rational>>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<Rational>& bid(std::size_t cell) const { return bids_.at(cell); }
  [[nodiscard]] const std::vector<std::vector<Rational>>& bids() const { return bids_; }
  void set_bid(std::size_t cell, std::vector<Rational> bid);

  [[nodiscard]] std::vector<std::size_t> cell_coordinates(std::size_t cell) const;
  [[nodiscard]] std::size_t cell_from_coordinates(const std::vector<std::size_t>& coords) const;
  /// Cell containing v; values outside the box are clamped to the nearest cell.
  [[nodiscard]] std::size_t locate(const std::vector<Rational>& v) const;
  /// Double-precision locate used by the samplers.
  [[nodiscard]] std::size_t locate(const double* v) const;
  [[nodiscard]] std::vector<Rational> lower_corner(std::size_t cell) const;
  [[nodiscard]] std::vector<Rational> upper_corner(std::size_t cell) const;
  [[nodiscard]] std::vector<Rational> midpoint(std::size_t cell) const;
  [[nodiscard]] const std::vector<Rational>& at(const std::vector<Rational>& v) const { return bid(locate(v)); }

  /// True when every bid coordinate is a non-negative integer multiple of `step`.
  [[nodiscard]] bool on_grid(const Rational& step) const;

  friend bool operator==(const PiecewiseConstantStrategy&, const PiecewiseConstantStrategy&) = default;

 private:
  std::vector<std::vector<Rational>> edges_;
  std::vector<std::vector<double>> edges_double_;
  std::vector<std::vector<Rational>> bids_;
};

/// Bids the valuation itself.
struct TruthfulStrategy {
  friend bool operator==(const TruthfulStrategy&, const TruthfulStrategy&) = default;
};

using Strategy = std::variant<PiecewiseConstantStrategy, TruthfulStrategy>;
using StrategyProfile = std::vector<Strategy>;

enum class Rounding { kDown, kUp };

/// Truthful play rounded to multiples of `step`, as a piecewise-constant strategy on cells
/// of width `step`. Rounding up bids ceil(v/step)*step and rounding down floor(v/step)*step;
/// the two differ from truth only on a null set of cell boundaries.
[[nodiscard]] PiecewiseConstantStrategy truthful_rounded(const std::vector<UniformPrior>& box, const Rational& step,
                                                         Rounding rounding);

/// Scalar form of the global bidder's bracket: the truthful bid rounded up (for actual
/// utilities) or down (for i-optimal utilities) to the grid.
[[nodiscard]] Rational llg_global_bracketing(Rounding mode, const Rational& value, const Rational& step);

/// Prior probability of each cell under independent uniform priors on `box`.
[[nodiscard]] std::vector<Rational> cell_masses(const PiecewiseConstantStrategy& s, const std::vector<UniformPrior>& box);

/// CSV: bidder,lower_0..lower_{d-1},upper_0..,bid_0.. with exact rationals; one row per cell.
[[nodiscard]] std::string strategies_to_csv(const DomainConfig& domain, const StrategyProfile& profile);

}  // namespace cabne
