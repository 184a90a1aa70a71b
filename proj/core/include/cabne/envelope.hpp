#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cabne/planes.hpp"
#include "cabne/strategy.hpp"

namespace cabne {

/// Index of the plane with the largest value at v. Candidates are screened in double
/// precision and the ones within `tolerance` of the best are compared exactly; exact ties go
/// to the lowest index.
[[nodiscard]] std::size_t argmax_plane(const std::vector<UtilityPlane>& planes, const std::vector<Rational>& v,
                                       double tolerance = 1e-9);

/// Exact upper envelope of the lines u(v) = slope * v - payment on [lo, hi].
class LineEnvelope {
 public:
  struct Segment {
    Rational from;
    Rational to;
    std::size_t plane = 0;
  };

  LineEnvelope(const std::vector<UtilityPlane>& planes, Rational lo, Rational hi);

  [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }
  /// Interior points where the top line changes.
  [[nodiscard]] std::vector<Rational> breakpoints() const;
  /// Top plane at v; at a breakpoint, the plane of the segment starting there.
  [[nodiscard]] std::size_t argmax(const Rational& v) const;
  [[nodiscard]] Rational value(const Rational& v) const;

 private:
  std::vector<Rational> slope_;
  std::vector<Rational> intercept_;
  std::vector<Segment> segments_;
};

/// Envelope values on the grid lo, lo + step, ..., hi in every dimension (the last point is
/// hi even when it is not a multiple). Points are row-major with the last dimension fastest.
struct GridEnvelope {
  std::vector<std::vector<Rational>> axes;
  std::vector<std::size_t> argmax;
  std::vector<Rational> value;

  [[nodiscard]] std::size_t num_points() const { return value.size(); }
  [[nodiscard]] std::vector<Rational> point(std::size_t index) const;
  [[nodiscard]] std::size_t index_of(const std::vector<std::size_t>& coords) const;
};

[[nodiscard]] GridEnvelope grid_envelope(const std::vector<UtilityPlane>& planes, const std::vector<UniformPrior>& box,
                                         const Rational& step, int threads = 1);

/// Pointwise maximum of a plane set over a value box: an exact line envelope in one
/// dimension, a grid table otherwise.
class UpperEnvelope {
 public:
  UpperEnvelope(std::vector<UtilityPlane> planes, const std::vector<UniformPrior>& box, const Rational& step,
                int threads = 1);

  [[nodiscard]] int dimension() const { return static_cast<int>(box_.size()); }
  [[nodiscard]] const std::vector<UtilityPlane>& planes() const { return planes_; }
  [[nodiscard]] const std::optional<LineEnvelope>& line() const { return line_; }
  [[nodiscard]] const std::optional<GridEnvelope>& grid() const { return grid_; }
  /// Exact maximum over the planes at v.
  [[nodiscard]] Rational value(const std::vector<Rational>& v) const;
  [[nodiscard]] std::size_t argmax(const std::vector<Rational>& v) const;
  /// Bound on how far the envelope can rise above the largest neighbouring grid value
  /// between grid points: r * step / 2, since every slope is a probability. Zero in 1-D.
  [[nodiscard]] Rational lipschitz_margin() const;

 private:
  std::vector<UtilityPlane> planes_;
  std::vector<UniformPrior> box_;
  Rational step_;
  std::optional<LineEnvelope> line_;
  std::optional<GridEnvelope> grid_;
};

/// Best response on a value grid of width `step`: each cell bids the top plane's bid at the
/// cell midpoint.
[[nodiscard]] PiecewiseConstantStrategy induce_strategy(const std::vector<UtilityPlane>& planes,
                                                        const std::vector<UniformPrior>& box, const Rational& step,
                                                        int threads = 1);

/// One-dimensional best response with cells at the exact envelope breakpoints.
[[nodiscard]] PiecewiseConstantStrategy induce_strategy(const LineEnvelope& envelope,
                                                        const std::vector<UtilityPlane>& planes);

}  // namespace cabne
