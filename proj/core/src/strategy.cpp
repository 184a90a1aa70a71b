#include "cabne/strategy.hpp"

#include <algorithm>
#include <sstream>

#include "cabne/errors.hpp"

namespace cabne {

PiecewiseConstantStrategy::PiecewiseConstantStrategy(std::vector<std::vector<Rational>> edges,
                                                     std::vector<std::vector<Rational>> bids)
    : edges_(std::move(edges)), bids_(std::move(bids)) {
  if (edges_.empty()) throw InvalidInput("strategy needs at least one dimension");
  std::size_t cells = 1;
  for (const auto& e : edges_) {
    if (e.size() < 2) throw InvalidInput("strategy dimension needs at least two breakpoints");
    for (std::size_t j = 1; j < e.size(); ++j) {
      if (!(e[j - 1] < e[j])) throw InvalidInput("strategy breakpoints must be strictly increasing");
    }
    cells *= e.size() - 1;
    std::vector<double> d;
    for (const auto& x : e) d.push_back(x.to_double());
    edges_double_.push_back(std::move(d));
  }
  if (bids_.size() != cells) throw InvalidInput("strategy needs one bid per cell");
  for (const auto& b : bids_) {
    if (static_cast<int>(b.size()) != dimension()) throw InvalidInput("strategy bid has the wrong dimension");
    for (const auto& x : b) {
      if (x.sign() < 0) throw InvalidInput("strategy bids must be non-negative");
    }
  }
}

PiecewiseConstantStrategy PiecewiseConstantStrategy::grid(const std::vector<UniformPrior>& box, const Rational& step) {
  if (step.sign() <= 0) throw InvalidInput("grid step must be positive");
  std::vector<std::vector<Rational>> edges;
  std::size_t cells = 1;
  for (const auto& p : box) {
    std::vector<Rational> e{p.lo};
    Rational next = (p.lo / step).floor() * step + step;
    for (; next < p.hi; next += step) e.push_back(next);
    e.push_back(p.hi);
    cells *= e.size() - 1;
    edges.push_back(std::move(e));
  }
  return PiecewiseConstantStrategy(std::move(edges),
                                   std::vector<std::vector<Rational>>(cells, std::vector<Rational>(box.size())));
}

void PiecewiseConstantStrategy::set_bid(std::size_t cell, std::vector<Rational> bid) {
  if (static_cast<int>(bid.size()) != dimension()) throw InvalidInput("strategy bid has the wrong dimension");
  bids_.at(cell) = std::move(bid);
}

std::vector<std::size_t> PiecewiseConstantStrategy::cell_coordinates(std::size_t cell) const {
  std::vector<std::size_t> coords(edges_.size());
  for (std::size_t k = edges_.size(); k-- > 0;) {
    const std::size_t m = edges_[k].size() - 1;
    coords[k] = cell % m;
    cell /= m;
  }
  return coords;
}

std::size_t PiecewiseConstantStrategy::cell_from_coordinates(const std::vector<std::size_t>& coords) const {
  std::size_t cell = 0;
  for (std::size_t k = 0; k < edges_.size(); ++k) cell = cell * (edges_[k].size() - 1) + coords[k];
  return cell;
}

std::size_t PiecewiseConstantStrategy::locate(const std::vector<Rational>& v) const {
  std::vector<std::size_t> coords(edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    // Index of the last breakpoint <= v, clamped to a valid cell.
    const auto it = std::upper_bound(e.begin(), e.end(), v.at(k));
    const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - e.begin() - 1, 0));
    coords[k] = std::min(j, e.size() - 2);
  }
  return cell_from_coordinates(coords);
}

std::size_t PiecewiseConstantStrategy::locate(const double* v) const {
  std::size_t cell = 0;
  for (std::size_t k = 0; k < edges_double_.size(); ++k) {
    const auto& e = edges_double_[k];
    const auto it = std::upper_bound(e.begin(), e.end(), v[k]);
    const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - e.begin() - 1, 0));
    cell = cell * (e.size() - 1) + std::min(j, e.size() - 2);
  }
  return cell;
}

std::vector<Rational> PiecewiseConstantStrategy::lower_corner(std::size_t cell) const {
  const auto coords = cell_coordinates(cell);
  std::vector<Rational> out;
  for (std::size_t k = 0; k < edges_.size(); ++k) out.push_back(edges_[k][coords[k]]);
  return out;
}

std::vector<Rational> PiecewiseConstantStrategy::upper_corner(std::size_t cell) const {
  const auto coords = cell_coordinates(cell);
  std::vector<Rational> out;
  for (std::size_t k = 0; k < edges_.size(); ++k) out.push_back(edges_[k][coords[k] + 1]);
  return out;
}

std::vector<Rational> PiecewiseConstantStrategy::midpoint(std::size_t cell) const {
  auto lo = lower_corner(cell);
  const auto hi = upper_corner(cell);
  for (std::size_t k = 0; k < lo.size(); ++k) lo[k] = (lo[k] + hi[k]) / Rational(2);
  return lo;
}

bool PiecewiseConstantStrategy::on_grid(const Rational& step) const {
  for (const auto& b : bids_) {
    for (const auto& x : b) {
      if (x.sign() < 0 || !(x / step).is_integer()) return false;
    }
  }
  return true;
}

PiecewiseConstantStrategy truthful_rounded(const std::vector<UniformPrior>& box, const Rational& step,
                                           Rounding rounding) {
  PiecewiseConstantStrategy s = PiecewiseConstantStrategy::grid(box, step);
  for (std::size_t cell = 0; cell < s.num_cells(); ++cell) {
    // Interior points of a cell all round to the same multiple of step.
    const auto mid = s.midpoint(cell);
    std::vector<Rational> bid;
    for (const auto& v : mid) bid.push_back(llg_global_bracketing(rounding, v, step));
    s.set_bid(cell, std::move(bid));
  }
  return s;
}

Rational llg_global_bracketing(Rounding mode, const Rational& value, const Rational& step) {
  if (step.sign() <= 0) throw InvalidInput("grid step must be positive");
  const Rational units = value / step;
  return (mode == Rounding::kUp ? units.ceil() : units.floor()) * step;
}

std::vector<Rational> cell_masses(const PiecewiseConstantStrategy& s, const std::vector<UniformPrior>& box) {
  if (static_cast<int>(box.size()) != s.dimension()) throw InvalidInput("prior box does not match strategy dimension");
  std::vector<std::vector<Rational>> per_dim;
  for (std::size_t k = 0; k < box.size(); ++k) {
    const auto& e = s.edges()[k];
    const Rational width = box[k].hi - box[k].lo;
    std::vector<Rational> m;
    for (std::size_t j = 0; j + 1 < e.size(); ++j) {
      const Rational a = max(e[j], box[k].lo);
      const Rational b = min(e[j + 1], box[k].hi);
      m.push_back(a < b ? (b - a) / width : Rational{});
    }
    per_dim.push_back(std::move(m));
  }
  std::vector<Rational> out;
  out.reserve(s.num_cells());
  for (std::size_t cell = 0; cell < s.num_cells(); ++cell) {
    const auto coords = s.cell_coordinates(cell);
    Rational p(1);
    for (std::size_t k = 0; k < coords.size(); ++k) p *= per_dim[k][coords[k]];
    out.push_back(std::move(p));
  }
  return out;
}

std::string strategies_to_csv(const DomainConfig& domain, const StrategyProfile& profile) {
  int width = 0;
  for (int i = 0; i < domain.num_bidders(); ++i) width = std::max(width, domain.auction.num_bundles(i));
  std::ostringstream out;
  out << "bidder";
  for (const char* part : {"lower", "upper", "bid"}) {
    for (int k = 0; k < width; ++k) out << ',' << part << '_' << k;
  }
  out << '\n';
  for (int i = 0; i < domain.num_bidders(); ++i) {
    const auto* pc = std::get_if<PiecewiseConstantStrategy>(&profile.at(static_cast<std::size_t>(i)));
    if (pc == nullptr) continue;  // truthful bidders have no table
    for (std::size_t cell = 0; cell < pc->num_cells(); ++cell) {
      out << domain.auction.bidder(i).id;
      for (const auto& row : {pc->lower_corner(cell), pc->upper_corner(cell), pc->bid(cell)}) {
        for (int k = 0; k < width; ++k) {
          out << ',';
          if (k < static_cast<int>(row.size())) out << row[static_cast<std::size_t>(k)].str();
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace cabne
