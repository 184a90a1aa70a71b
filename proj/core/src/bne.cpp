#include "cabne/bne.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "cabne/errors.hpp"
#include "cabne/parallel.hpp"

namespace cabne {

std::vector<std::vector<Rational>> cell_vertex_bids(const std::vector<Rational>& v_max, const Rational& step,
                                                    std::uint64_t budget) {
  if (step.sign() <= 0) throw InvalidInput("grid step must be positive");
  std::vector<std::vector<Rational>> axes;
  std::uint64_t count = 1;
  for (const auto& top : v_max) {
    if (top.sign() < 0) throw InvalidInput("v_max must be non-negative");
    const Rational units = (top / step).floor();
    if (!units.is_small() || units.to_double() > static_cast<double>(budget)) {
      throw BudgetExceeded("bid grid exceeds the budget of " + std::to_string(budget) + " points");
    }
    std::vector<Rational> axis;
    const auto m = static_cast<std::int64_t>(units.to_double());
    for (std::int64_t k = 0; k <= m; ++k) axis.push_back(step * Rational(k));
    count *= axis.size();
    if (count > budget) throw BudgetExceeded("bid grid exceeds the budget of " + std::to_string(budget) + " points");
    axes.push_back(std::move(axis));
  }
  std::vector<std::vector<Rational>> out;
  out.reserve(count);
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<Rational> b;
    for (std::size_t k = 0; k < axes.size(); ++k) b.push_back(axes[k][idx[k]]);
    out.push_back(std::move(b));
    std::size_t k = axes.size();
    while (k-- > 0) {
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

bool rule_is_sound(const DomainConfig& domain, PaymentRule rule) {
  if (rule == PaymentRule::kFirstPrice || rule == PaymentRule::kVcg) return true;
  return rule != PaymentRule::kVcgNearest && domain.declares_nondecreasing(rule);
}

}  // namespace

void check_rule_allowed(const DomainConfig& domain, PaymentRule rule, bool unsound) {
  if (unsound || rule_is_sound(domain, rule)) return;
  if (rule == PaymentRule::kVcgNearest) {
    throw PreconditionViolation(
        "vcg-nearest is not non-decreasing, so the loss bound does not hold; pass --unsound to solve anyway");
  }
  if (!domain.declares_nondecreasing(rule)) {
    throw PreconditionViolation("domain " + domain.name + " does not declare " + std::string(rule_name(rule)) +
                                " non-decreasing; pass --unsound to solve anyway");
  }
}

StrategyProfile initial_profile(const DomainConfig& domain, const Rational& step) {
  StrategyProfile out;
  for (int i = 0; i < domain.num_bidders(); ++i) {
    if (domain.truthful[static_cast<std::size_t>(i)]) {
      out.emplace_back(TruthfulStrategy{});
    } else {
      out.emplace_back(truthful_rounded(domain.priors[static_cast<std::size_t>(i)], step, Rounding::kDown));
    }
  }
  return out;
}

namespace {

struct Distributions {
  OpponentBidDistribution actual;
  OpponentBidDistribution optimal;
  bool same = true;
  bool exact = true;
};

Distributions opponent_distributions(const DomainConfig& domain, int i, const StrategyProfile& profile,
                                     const Rational& step, bool force_sampling, std::uint64_t budget,
                                     const ValuationSamples* samples) {
  Distributions d;
  for (int j = 0; j < domain.num_bidders(); ++j) {
    if (j != i && std::holds_alternative<TruthfulStrategy>(profile[static_cast<std::size_t>(j)])) d.same = false;
  }
  // Truthful opponents bid above truth for actual utilities and below it for the bound.
  const StrategyProfile up = bracket_truthful(domain, profile, step, Rounding::kUp);
  const StrategyProfile down = bracket_truthful(domain, profile, step, Rounding::kDown);
  if (!force_sampling) {
    try {
      d.actual = exact_opponent_distribution(domain, i, up, budget);
      if (!d.same) d.optimal = exact_opponent_distribution(domain, i, down, budget);
      return d;
    } catch (const BudgetExceeded&) {
    } catch (const PreconditionViolation&) {
    }
  }
  if (samples == nullptr) throw PreconditionViolation("sampling mode needs valuation samples");
  d.exact = false;
  d.actual = sampled_opponent_distribution(domain, i, up, *samples);
  if (!d.same) d.optimal = sampled_opponent_distribution(domain, i, down, *samples);
  return d;
}

bool needs_samples(const DomainConfig& domain, const SolverConfig& config) {
  return config.force_sampling || domain.has_nested_bundles();
}

using CacheMap = std::map<int, std::unique_ptr<OutcomeCache>>;

ProfileEvaluation evaluate(const DomainConfig& domain, const StrategyProfile& profile, const SolverConfig& config,
                           std::uint64_t sample_seed, CacheMap& caches) {
  ProfileEvaluation out;
  out.best_responses = profile;
  std::unique_ptr<ValuationSamples> samples;
  auto lazy_samples = [&]() -> const ValuationSamples* {
    if (!samples) samples = std::make_unique<ValuationSamples>(sample_valuations(domain, config.samples, sample_seed));
    return samples.get();
  };
  if (needs_samples(domain, config)) lazy_samples();
  for (const auto& cls : domain.classes()) {
    const int i = cls.front();
    if (domain.truthful[static_cast<std::size_t>(i)]) continue;
    const auto* current = std::get_if<PiecewiseConstantStrategy>(&profile.at(static_cast<std::size_t>(i)));
    if (current == nullptr) throw PreconditionViolation("solved bidders need piecewise-constant strategies");
    const auto& box = domain.priors[static_cast<std::size_t>(i)];
    const int r = domain.auction.num_bundles(i);
    std::vector<Rational> v_max;
    for (const auto& p : box) v_max.push_back(p.hi);
    const auto bids = cell_vertex_bids(v_max, config.step, config.grid_budget);

    Distributions dist;
    try {
      dist = opponent_distributions(domain, i, profile, config.step, config.force_sampling, config.exact_budget,
                                    samples.get());
    } catch (const PreconditionViolation&) {
      dist = opponent_distributions(domain, i, profile, config.step, true, config.exact_budget, lazy_samples());
    }
    out.exact = out.exact && dist.exact;

    auto& cache = caches[i];
    if (!cache) {
      cache = std::make_unique<OutcomeCache>(domain.auction, config.rule, config.core, config.step, config.cache_limit);
    }
    const auto orders = TieBreakOrder::all(r);
    std::vector<UtilityPlane> actual;
    std::vector<UtilityPlane> optimal;
    if (dist.same) {
      std::vector<TieBreakOrder> all{TieBreakOrder{}};
      all.insert(all.end(), orders.begin(), orders.end());
      for (auto& row : cache->planes(dist.actual, bids, all, config.threads)) {
        actual.push_back(std::move(row[0]));
        for (std::size_t k = 1; k < row.size(); ++k) optimal.push_back(std::move(row[k]));
      }
    } else {
      for (auto& row : cache->planes(dist.actual, bids, {TieBreakOrder{}}, config.threads)) {
        actual.push_back(std::move(row[0]));
      }
      for (auto& row : cache->planes(dist.optimal, bids, orders, config.threads)) {
        for (auto& p : row) optimal.push_back(std::move(p));
      }
    }

    BidderLoss loss;
    loss.bidder = i;
    // Best response on the value grid.
    PiecewiseConstantStrategy response = induce_strategy(actual, box, config.step, config.threads);
    for (std::size_t cell = 0; cell < response.num_cells(); ++cell) {
      for (std::size_t k = 0; k < v_max.size(); ++k) {
        if (v_max[k].sign() > 0 && response.bid(cell)[k] == bids.back()[k]) loss.saturated = true;
      }
    }

    // Loss of the current strategy: on each of its cells the bound minus the current plane
    // is convex, so its maximum over the cell sits at a corner.
    std::map<std::vector<Rational>, std::size_t> bid_index;
    for (std::size_t a = 0; a < bids.size(); ++a) bid_index.emplace(bids[a], a);
    std::map<std::vector<Rational>, Rational> bound_at;
    std::vector<std::vector<Rational>> corners_needed;
    const std::size_t corner_count = std::size_t{1} << r;
    auto corner = [&](std::size_t cell, std::size_t mask) {
      auto lo = current->lower_corner(cell);
      const auto hi = current->upper_corner(cell);
      for (std::size_t k = 0; k < lo.size(); ++k) {
        if ((mask >> k) & 1U) lo[k] = hi[k];
      }
      return lo;
    };
    for (std::size_t cell = 0; cell < current->num_cells(); ++cell) {
      for (std::size_t mask = 0; mask < corner_count; ++mask) {
        auto v = corner(cell, mask);
        if (bound_at.emplace(v, Rational{}).second) corners_needed.push_back(std::move(v));
      }
    }
    std::vector<Rational> bound_values(corners_needed.size());
    parallel_for(corners_needed.size(), config.threads, [&](std::size_t k) {
      bound_values[k] = optimal[argmax_plane(optimal, corners_needed[k])].value(corners_needed[k]);
    });
    for (std::size_t k = 0; k < corners_needed.size(); ++k) bound_at[corners_needed[k]] = bound_values[k];

    bool first = true;
    for (std::size_t cell = 0; cell < current->num_cells(); ++cell) {
      const auto& beta = current->bid(cell);
      const auto found = bid_index.find(beta);
      const UtilityPlane plane =
          found != bid_index.end()
              ? actual[found->second]
              : utility_plane(domain.auction, config.rule, i, beta, dist.actual, TieBreakOrder{}, config.core);
      for (std::size_t mask = 0; mask < corner_count; ++mask) {
        const auto v = corner(cell, mask);
        Rational l = bound_at.at(v) - plane.value(v);
        if (first || loss.epsilon < l) {
          loss.epsilon = std::move(l);
          loss.worst_valuation = v;
          first = false;
        }
      }
    }
    if (loss.epsilon.sign() < 0) loss.epsilon = Rational{};
    if (config.lipschitz_margin) loss.epsilon += Rational(r) * config.step / Rational(2);
    out.epsilon = max(out.epsilon, loss.epsilon);
    for (const int j : cls) out.best_responses[static_cast<std::size_t>(j)] = response;
    out.bidders.push_back(std::move(loss));
  }
  return out;
}

}  // namespace

ProfileEvaluation evaluate_profile(const DomainConfig& domain, const StrategyProfile& profile,
                                   const SolverConfig& config, std::uint64_t sample_seed) {
  CacheMap caches;
  return evaluate(domain, profile, config, sample_seed, caches);
}

EpsilonCertificate solve(const DomainConfig& domain, const SolverConfig& config,
                         const std::function<void(const IterationReport&)>& on_iteration) {
  check_rule_allowed(domain, config.rule, config.unsound);
  if (config.step.sign() <= 0) throw InvalidInput("grid step must be positive");
  if (config.max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");
  EpsilonCertificate cert;
  cert.domain = domain.name;
  cert.rule = config.rule;
  cert.step = config.step;
  cert.seed = config.seed;
  cert.unsound = config.unsound && !rule_is_sound(domain, config.rule);
  if (config.lipschitz_margin) {
    int r = 0;
    for (int i = 0; i < domain.num_bidders(); ++i) r = std::max(r, domain.auction.num_bundles(i));
    cert.margin = Rational(r) * config.step / Rational(2);
  }
  if (cert.unsound) cert.warnings.push_back("rule is not declared non-decreasing; epsilon is not a valid bound");

  CacheMap caches;
  StrategyProfile profile = initial_profile(domain, config.step);
  std::vector<bool> saturated(static_cast<std::size_t>(domain.num_bidders()), false);
  bool have_best = false;
  std::vector<StrategyProfile> seen;
  for (int t = 1; t <= config.max_iterations; ++t) {
    ProfileEvaluation eval = evaluate(domain, profile, config, mix_seed(config.seed, static_cast<std::uint64_t>(t)), caches);
    IterationReport report;
    report.iteration = t;
    report.epsilon = eval.epsilon;
    report.bidders = eval.bidders;
    report.exact = eval.exact;
    for (const auto& [i, cache] : caches) report.cached_outcomes += cache->size();
    for (const auto& b : eval.bidders) {
      if (b.saturated) saturated[static_cast<std::size_t>(b.bidder)] = true;
    }
    cert.exact = cert.exact && eval.exact;
    if (!have_best || eval.epsilon < cert.epsilon) {
      have_best = true;
      cert.epsilon = eval.epsilon;
      cert.best_iteration = t;
      cert.profile = profile;
    }
    cert.iterations = t;
    cert.trace.push_back(report);
    if (on_iteration) on_iteration(report);
    // Exact evaluation is a function of the profile, so once a profile recurs the
    // remaining iterations would only replay a cycle already seen.
    seen.push_back(std::move(profile));
    profile = std::move(eval.best_responses);
    const bool cycled = eval.exact && std::find(seen.begin(), seen.end(), profile) != seen.end();
    if (t >= config.min_iterations && (report.epsilon <= config.target_epsilon || cycled)) break;
  }
  if (!cert.exact) cert.samples = config.samples;
  cert.converged = cert.epsilon <= config.target_epsilon;
  for (int i = 0; i < domain.num_bidders(); ++i) {
    if (saturated[static_cast<std::size_t>(i)]) {
      cert.warnings.push_back("bidder " + domain.auction.bidder(i).id +
                              ": a best response bids v_max on some bundle; bids above v_max were not considered");
    }
  }
  return cert;
}

namespace {

/// Expected (win probability per bundle, payment) for one bid, from ordinary tie sets.
std::pair<std::vector<Rational>, Rational> direct_plane(const DomainConfig& domain, PaymentRule rule, int i,
                                                        const std::vector<Rational>& bid,
                                                        const OpponentBidDistribution& dist, const CoreOptions& core) {
  std::vector<Rational> win(bid.size());
  Rational pay;
  for (const auto& e : dist.support) {
    const BidProfile b = dist.profile(domain.auction, bid, e);
    const WdResult x = winner_determination(domain.auction, b, core.wd);
    const Rational share = e.weight / Rational(static_cast<std::int64_t>(x.allocations.size()));
    for (const auto& a : x.allocations) {
      if (a[i] == kNoBundle) continue;
      win[static_cast<std::size_t>(a[i])] += share;
      pay += share * compute_payments(rule, domain.auction, b, a, core)[i];
    }
  }
  return {std::move(win), std::move(pay)};
}

Rational utility(const std::pair<std::vector<Rational>, Rational>& plane, const std::vector<Rational>& v) {
  Rational u = -plane.second;
  for (std::size_t k = 0; k < v.size(); ++k) u += plane.first[k] * v[k];
  return u;
}

}  // namespace

VerifyReport verify_at(const DomainConfig& domain, const StrategyProfile& profile, int bidder,
                       const std::vector<std::vector<Rational>>& valuations, const VerifyConfig& config) {
  if (config.refine < 1) throw InvalidInput("refine must be at least 1");
  VerifyReport report;
  std::unique_ptr<ValuationSamples> samples;
  const bool nested = domain.has_nested_bundles();
  if (nested) samples = std::make_unique<ValuationSamples>(sample_valuations(domain, config.samples, config.seed));
  Distributions dist = opponent_distributions(domain, bidder, profile, config.step, nested, config.exact_budget,
                                              samples.get());
  const auto& box = domain.priors.at(static_cast<std::size_t>(bidder));
  std::vector<Rational> v_max;
  for (const auto& p : box) v_max.push_back(p.hi);
  const auto dense = cell_vertex_bids(v_max, config.step / Rational(config.refine));
  report.bids_per_valuation = dense.size();
  std::vector<std::pair<std::vector<Rational>, Rational>> planes(dense.size());
  parallel_for(dense.size(), config.threads, [&](std::size_t a) {
    planes[a] = direct_plane(domain, config.rule, bidder, dense[a], dist.actual, config.core);
  });
  std::map<std::vector<Rational>, std::size_t> index;
  for (std::size_t a = 0; a < dense.size(); ++a) index.emplace(dense[a], a);

  const Strategy& s = profile.at(static_cast<std::size_t>(bidder));
  bool first = true;
  for (const auto& v : valuations) {
    const std::vector<Rational> current =
        std::holds_alternative<TruthfulStrategy>(s) ? v : std::get<PiecewiseConstantStrategy>(s).at(v);
    const auto found = index.find(current);
    const auto current_plane = found != index.end()
                                   ? planes[found->second]
                                   : direct_plane(domain, config.rule, bidder, current, dist.actual, config.core);
    const Rational base = utility(current_plane, v);
    std::size_t best = 0;
    Rational best_u = utility(planes[0], v);
    for (std::size_t a = 1; a < planes.size(); ++a) {
      Rational u = utility(planes[a], v);
      if (best_u < u) {
        best_u = std::move(u);
        best = a;
      }
    }
    Rational loss = best_u - base;
    if (first || report.max_loss < loss) {
      report.max_loss = loss;
      report.worst_bidder = bidder;
      report.worst_valuation = v;
      report.current_bid = current;
      report.best_bid = dense[best];
      first = false;
    }
    ++report.valuations_checked;
  }
  if (report.max_loss.sign() < 0) report.max_loss = Rational{};
  return report;
}

VerifyReport verify(const DomainConfig& domain, const StrategyProfile& profile, const VerifyConfig& config) {
  const ValuationSamples values = sample_valuations(domain, config.valuations, mix_seed(config.seed, 0x7e51f1));
  VerifyReport total;
  bool first = true;
  for (const auto& cls : domain.classes()) {
    const int i = cls.front();
    if (domain.truthful[static_cast<std::size_t>(i)]) continue;
    std::vector<std::vector<Rational>> vals;
    for (std::size_t t = 0; t < values.size(); ++t) {
      std::vector<Rational> v;
      for (int k = 0; k < domain.auction.num_bundles(i); ++k) v.push_back(Rational::from_double(values.value(t, i, k)));
      vals.push_back(std::move(v));
    }
    VerifyReport r = verify_at(domain, profile, i, vals, config);
    total.valuations_checked += r.valuations_checked;
    total.bids_per_valuation = std::max(total.bids_per_valuation, r.bids_per_valuation);
    if (first || total.max_loss < r.max_loss) {
      const std::size_t checked = total.valuations_checked;
      const std::size_t per = total.bids_per_valuation;
      total = std::move(r);
      total.valuations_checked = checked;
      total.bids_per_valuation = per;
      first = false;
    }
  }
  return total;
}

}  // namespace cabne
