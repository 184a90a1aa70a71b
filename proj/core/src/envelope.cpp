#include "cabne/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "cabne/errors.hpp"
#include "cabne/parallel.hpp"

namespace cabne {

std::size_t argmax_plane(const std::vector<UtilityPlane>& planes, const std::vector<Rational>& v, double tolerance) {
  if (planes.empty()) throw InvalidInput("envelope needs at least one plane");
  std::vector<double> vd;
  for (const auto& x : v) vd.push_back(x.to_double());
  double top = -HUGE_VAL;
  std::vector<double> values(planes.size());
  for (std::size_t k = 0; k < planes.size(); ++k) {
    values[k] = planes[k].slope_double.size() == v.size() ? planes[k].value(vd.data())
                                                           : planes[k].value(v).to_double();
    top = std::max(top, values[k]);
  }
  std::size_t best = planes.size();
  Rational best_value;
  for (std::size_t k = 0; k < planes.size(); ++k) {
    if (values[k] < top - tolerance * std::max(1.0, std::fabs(top))) continue;
    Rational u = planes[k].value(v);
    if (best == planes.size() || best_value < u) {
      best = k;
      best_value = std::move(u);
    }
  }
  return best;
}

LineEnvelope::LineEnvelope(const std::vector<UtilityPlane>& planes, Rational lo, Rational hi) {
  if (planes.empty()) throw InvalidInput("envelope needs at least one plane");
  if (hi < lo) throw InvalidInput("envelope interval is empty");
  for (const auto& p : planes) {
    if (p.win_prob.size() != 1) throw InvalidInput("line envelope needs one-dimensional planes");
    slope_.push_back(p.win_prob[0]);
    intercept_.push_back(-p.expected_payment);
  }
  const std::size_t n = planes.size();
  auto at = [&](std::size_t k, const Rational& x) { return slope_[k] * x + intercept_[k]; };
  // Top line at lo; ties go to the larger slope since it stays on top to the right.
  std::size_t cur = 0;
  Rational cur_value = at(0, lo);
  for (std::size_t k = 1; k < n; ++k) {
    Rational u = at(k, lo);
    if (cur_value < u || (u == cur_value && slope_[cur] < slope_[k])) {
      cur = k;
      cur_value = std::move(u);
    }
  }
  Rational x = lo;
  while (true) {
    // Nearest crossing to the right by a steeper line; ties go to the steepest.
    std::optional<std::size_t> next;
    Rational next_x;
    for (std::size_t k = 0; k < n; ++k) {
      if (!(slope_[cur] < slope_[k])) continue;
      const Rational cross = (intercept_[cur] - intercept_[k]) / (slope_[k] - slope_[cur]);
      if (!(x < cross)) continue;
      if (!next || cross < next_x || (cross == next_x && slope_[*next] < slope_[k])) {
        next = k;
        next_x = cross;
      }
    }
    if (!next || !(next_x < hi)) {
      segments_.push_back({x, hi, cur});
      break;
    }
    segments_.push_back({x, next_x, cur});
    x = next_x;
    cur = *next;
  }
}

std::vector<Rational> LineEnvelope::breakpoints() const {
  std::vector<Rational> out;
  for (std::size_t s = 1; s < segments_.size(); ++s) out.push_back(segments_[s].from);
  return out;
}

std::size_t LineEnvelope::argmax(const Rational& v) const {
  for (std::size_t s = segments_.size(); s-- > 0;) {
    if (!(v < segments_[s].from)) return segments_[s].plane;
  }
  return segments_.front().plane;
}

Rational LineEnvelope::value(const Rational& v) const {
  const std::size_t k = argmax(v);
  return slope_[k] * v + intercept_[k];
}

std::vector<Rational> GridEnvelope::point(std::size_t index) const {
  std::vector<Rational> v(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    v[k] = axes[k][index % axes[k].size()];
    index /= axes[k].size();
  }
  return v;
}

std::size_t GridEnvelope::index_of(const std::vector<std::size_t>& coords) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) index = index * axes[k].size() + coords[k];
  return index;
}

GridEnvelope grid_envelope(const std::vector<UtilityPlane>& planes, const std::vector<UniformPrior>& box,
                           const Rational& step, int threads) {
  const PiecewiseConstantStrategy cells = PiecewiseConstantStrategy::grid(box, step);
  GridEnvelope g;
  g.axes = cells.edges();
  std::size_t count = 1;
  for (const auto& a : g.axes) count *= a.size();
  g.argmax.resize(count);
  g.value.resize(count);
  parallel_for(count, threads, [&](std::size_t p) {
    const auto v = g.point(p);
    g.argmax[p] = argmax_plane(planes, v);
    g.value[p] = planes[g.argmax[p]].value(v);
  });
  return g;
}

UpperEnvelope::UpperEnvelope(std::vector<UtilityPlane> planes, const std::vector<UniformPrior>& box,
                             const Rational& step, int threads)
    : planes_(std::move(planes)), box_(box), step_(step) {
  if (planes_.empty()) throw InvalidInput("envelope needs at least one plane");
  if (box_.size() == 1) {
    line_.emplace(planes_, box_[0].lo, box_[0].hi);
  } else {
    grid_ = grid_envelope(planes_, box_, step_, threads);
  }
}

Rational UpperEnvelope::value(const std::vector<Rational>& v) const {
  if (line_) return line_->value(v.at(0));
  return planes_[argmax(v)].value(v);
}

std::size_t UpperEnvelope::argmax(const std::vector<Rational>& v) const {
  if (line_) return line_->argmax(v.at(0));
  return argmax_plane(planes_, v);
}

Rational UpperEnvelope::lipschitz_margin() const {
  if (line_) return Rational{};
  return Rational(static_cast<std::int64_t>(box_.size())) * step_ / Rational(2);
}

PiecewiseConstantStrategy induce_strategy(const std::vector<UtilityPlane>& planes, const std::vector<UniformPrior>& box,
                                          const Rational& step, int threads) {
  PiecewiseConstantStrategy s = PiecewiseConstantStrategy::grid(box, step);
  std::vector<std::size_t> best(s.num_cells());
  parallel_for(s.num_cells(), threads, [&](std::size_t cell) { best[cell] = argmax_plane(planes, s.midpoint(cell)); });
  for (std::size_t cell = 0; cell < s.num_cells(); ++cell) s.set_bid(cell, planes[best[cell]].bid);
  return s;
}

PiecewiseConstantStrategy induce_strategy(const LineEnvelope& envelope, const std::vector<UtilityPlane>& planes) {
  std::vector<Rational> edges;
  std::vector<std::vector<Rational>> bids;
  for (const auto& seg : envelope.segments()) {
    const auto& bid = planes.at(seg.plane).bid;
    if (!bids.empty() && bids.back() == bid) continue;  // merge runs with the same bid
    edges.push_back(seg.from);
    bids.push_back(bid);
  }
  edges.push_back(envelope.segments().back().to);
  if (edges.size() == 2 && edges[0] == edges[1]) throw InvalidInput("cannot induce a strategy on an empty interval");
  return PiecewiseConstantStrategy({std::move(edges)}, std::move(bids));
}

}  // namespace cabne
