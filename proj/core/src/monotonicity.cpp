#include "cabne/monotonicity.hpp"

#include <algorithm>

#include "cabne/errors.hpp"
#include "cabne/parallel.hpp"

namespace cabne {
namespace {

bool is_efficient(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x, const WdOptions& wd) {
  if (!x.valid_for(instance)) return false;
  return reported_welfare(instance, bids, x) == winner_determination(instance, bids, wd).welfare;
}

}  // namespace

BidProfile MonotonicityProbe::raised_profile() const {
  BidProfile out = base;
  out.set_bids_of(bidder, raised);
  return out;
}

MonotonicityProbe MonotonicityProbe::single(AuctionInstance instance, BidProfile base, int bidder, int bundle,
                                            Rational amount, Allocation allocation) {
  std::vector<Rational> raised = base.bids_of(bidder);
  raised.at(static_cast<std::size_t>(bundle)) = std::move(amount);
  return MonotonicityProbe{std::move(instance), std::move(base), bidder, std::move(raised), std::move(allocation)};
}

std::optional<ViolationCertificate> check_probe(PaymentRule rule, const MonotonicityProbe& probe,
                                                const CoreOptions& options) {
  const auto& inst = probe.instance;
  if (probe.bidder < 0 || probe.bidder >= inst.num_bidders()) throw InvalidProbe("probe bidder out of range");
  const auto& before = probe.base.bids_of(probe.bidder);
  if (probe.raised.size() != before.size()) throw InvalidProbe("raised bid vector has the wrong length");
  bool strict = false;
  for (std::size_t k = 0; k < before.size(); ++k) {
    if (probe.raised[k] < before[k]) throw InvalidProbe("probe lowers a bid");
    strict = strict || before[k] < probe.raised[k];
  }
  if (!strict) throw InvalidProbe("probe does not raise any bid");
  const BidProfile after = probe.raised_profile();
  if (!is_efficient(inst, probe.base, probe.allocation, options.wd)) {
    throw InvalidProbe("allocation is not efficient under the base profile");
  }
  if (!is_efficient(inst, after, probe.allocation, options.wd)) {
    throw InvalidProbe("allocation is not efficient under the raised profile");
  }
  const Rational p0 = compute_payments(rule, inst, probe.base, probe.allocation, options)[probe.bidder];
  const Rational p1 = compute_payments(rule, inst, after, probe.allocation, options)[probe.bidder];
  if (!(p1 < p0)) return std::nullopt;
  return ViolationCertificate{rule, probe, p0, p1};
}

InstanceGenerator random_family(int min_bidders, int max_bidders, int goods, int max_bundles, int max_bid) {
  return [=](std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_n(min_bidders, max_bidders);
    std::uniform_int_distribution<int> pick_r(1, max_bundles);
    std::uniform_int_distribution<std::uint64_t> pick_mask(1, (std::uint64_t{1} << goods) - 1);
    std::uniform_int_distribution<int> pick_bid(0, max_bid);
    std::vector<std::string> names;
    for (int g = 0; g < goods; ++g) names.push_back(std::string(1, static_cast<char>('A' + g % 26)) + (g >= 26 ? std::to_string(g) : ""));
    const int n = pick_n(rng);
    std::vector<BidderSpec> bidders;
    std::vector<std::vector<Rational>> bids;
    for (int i = 0; i < n; ++i) {
      BidderSpec spec{std::to_string(i + 1), {}};
      const int want = pick_r(rng);
      for (int attempt = 0; attempt < 16 && static_cast<int>(spec.bundles.size()) < want; ++attempt) {
        const Bundle k(pick_mask(rng));
        if (std::find(spec.bundles.begin(), spec.bundles.end(), k) == spec.bundles.end()) spec.bundles.push_back(k);
      }
      std::vector<Rational> row;
      for (std::size_t k = 0; k < spec.bundles.size(); ++k) row.emplace_back(pick_bid(rng));
      bidders.push_back(std::move(spec));
      bids.push_back(std::move(row));
    }
    AuctionInstance inst(std::move(names), std::move(bidders));
    BidProfile b(inst, std::move(bids));
    return ProbeInstance{std::move(inst), std::move(b)};
  };
}

InstanceGenerator three_bidder_two_good_family(int max_bid) {
  return [=](std::mt19937_64& rng) {
    const std::vector<Bundle> options{Bundle(0b01), Bundle(0b10), Bundle(0b11)};
    std::uniform_int_distribution<int> pick_subset(1, 7);
    std::uniform_int_distribution<int> pick_bid(0, max_bid);
    std::vector<BidderSpec> bidders;
    std::vector<std::vector<Rational>> bids;
    for (int i = 0; i < 3; ++i) {
      const int subset = pick_subset(rng);
      BidderSpec spec{std::to_string(i + 1), {}};
      std::vector<Rational> row;
      for (int k = 0; k < 3; ++k) {
        if ((subset >> k) & 1) {
          spec.bundles.push_back(options[static_cast<std::size_t>(k)]);
          row.emplace_back(pick_bid(rng));
        }
      }
      bidders.push_back(std::move(spec));
      bids.push_back(std::move(row));
    }
    AuctionInstance inst({"1", "2"}, std::move(bidders));
    BidProfile b(inst, std::move(bids));
    return ProbeInstance{std::move(inst), std::move(b)};
  };
}

InstanceGenerator two_bidder_two_good_family(int max_bid) {
  return [=](std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_bid(0, max_bid);
    AuctionInstance inst = AuctionInstance::from_names({"A", "B"}, {{"1", {{"A"}, {"A", "B"}}}, {"2", {{"B"}}}});
    const int a = pick_bid(rng);
    const int ab = pick_bid(rng);
    BidProfile b(inst, {{a, std::max(a, ab)}, {pick_bid(rng)}});
    return ProbeInstance{std::move(inst), std::move(b)};
  };
}

InstanceGenerator llg_family(int grid) {
  return [=](std::mt19937_64& rng) {
    std::uniform_int_distribution<int> local(0, grid);
    std::uniform_int_distribution<int> global(0, 2 * grid);
    AuctionInstance inst =
        AuctionInstance::from_names({"A", "B"}, {{"L1", {{"A"}}}, {"L2", {{"B"}}}, {"G", {{"A", "B"}}}});
    BidProfile b(inst, {{Rational(local(rng), grid)}, {Rational(local(rng), grid)}, {Rational(global(rng), grid)}});
    return ProbeInstance{std::move(inst), std::move(b)};
  };
}

InstanceGenerator fixed_family(std::vector<ProbeInstance> instances) {
  if (instances.empty()) throw InvalidInput("fixed instance family is empty");
  auto shared = std::make_shared<const std::vector<ProbeInstance>>(std::move(instances));
  // The rng stream is drawn once so that the instance picked depends only on the seed.
  return [shared](std::mt19937_64& rng) { return (*shared)[rng() % shared->size()]; };
}

std::vector<MonotonicityProbe> probes_for(const AuctionInstance& instance, const BidProfile& bids,
                                          bool multi_coordinate, const WdOptions& wd) {
  std::vector<MonotonicityProbe> out;
  const WdResult best = winner_determination(instance, bids, wd);
  for (const Allocation& x : best.allocations) {
    for (int i = 0; i < instance.num_bidders(); ++i) {
      const int r = instance.num_bundles(i);
      // Largest common raise of all bundles other than x_i that keeps x efficient.
      Rational headroom;
      bool bounded = false;
      for (int k = 0; k < r; ++k) {
        const Rational& current = bids.bid(i, k);
        std::vector<Rational> deltas;
        if (x[i] == k) {
          deltas.emplace_back(1);
          if (current.sign() > 0) deltas.push_back(current / Rational(2));
        } else {
          // x stays efficient while W(x) >= b_i(k) + delta + W_{-i}(k).
          const Rational rival = current + constrained_winner_determination(instance, i, k, bids, wd).welfare;
          const Rational slack = best.welfare - rival;
          headroom = bounded ? min(headroom, slack) : slack;
          bounded = true;
          if (slack.sign() > 0) {
            deltas.push_back(slack);
            deltas.push_back(slack / Rational(2));
          }
        }
        for (const auto& d : deltas) {
          out.push_back(MonotonicityProbe::single(instance, bids, i, k, current + d, x));
        }
      }
      if (multi_coordinate && r > 1) {
        const Rational d = x[i] != kNoBundle ? Rational(1) : headroom;
        if (d.sign() > 0) {
          std::vector<Rational> raised = bids.bids_of(i);
          for (auto& v : raised) v += d;
          out.push_back(MonotonicityProbe{instance, bids, i, std::move(raised), x});
        }
      }
    }
  }
  return out;
}

SearchResult search_violations(PaymentRule rule, const InstanceGenerator& generator, const SearchOptions& options) {
  SearchResult result;
  constexpr std::size_t kBatch = 64;
  struct Checked {
    std::vector<std::optional<ViolationCertificate>> outcomes;
    std::vector<bool> skipped;
  };
  std::uint64_t next_instance = 0;
  while (result.probes_checked < options.probe_budget) {
    std::vector<Checked> batch(kBatch);
    parallel_for(kBatch, options.threads, [&](std::size_t k) {
      std::mt19937_64 rng(mix_seed(options.seed, next_instance + k));
      const ProbeInstance pi = generator(rng);
      for (const auto& probe : probes_for(pi.instance, pi.bids, options.multi_coordinate, options.core.wd)) {
        try {
          batch[k].outcomes.push_back(check_probe(rule, probe, options.core));
          batch[k].skipped.push_back(false);
        } catch (const InfeasibleForm&) {
          batch[k].outcomes.emplace_back();
          batch[k].skipped.push_back(true);
        }
      }
    });
    bool produced = false;
    for (auto& item : batch) {
      ++result.instances_checked;
      for (std::size_t p = 0; p < item.outcomes.size(); ++p) {
        if (result.probes_checked >= options.probe_budget) break;
        produced = true;
        ++result.probes_checked;
        if (item.skipped[p]) {
          ++result.probes_skipped;
        } else if (item.outcomes[p]) {
          result.certificates.push_back(std::move(*item.outcomes[p]));
        }
      }
      if (result.probes_checked >= options.probe_budget) break;
    }
    next_instance += kBatch;
    // A generator that never yields a probe would otherwise loop forever.
    if (!produced && next_instance >= 64 * kBatch && result.probes_checked == 0) break;
  }
  return result;
}

namespace {

std::optional<ViolationCertificate> recheck(const ViolationCertificate& cert, MonotonicityProbe probe,
                                            const CoreOptions& options) {
  try {
    return check_probe(cert.rule, probe, options);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<MonotonicityProbe> without_bidder(const MonotonicityProbe& p, int j) {
  if (j == p.bidder || p.instance.num_bidders() <= 1) return std::nullopt;
  std::vector<BidderSpec> bidders = p.instance.bidders();
  bidders.erase(bidders.begin() + j);
  AuctionInstance inst(p.instance.goods(), std::move(bidders));
  auto rows = p.base.all();
  rows.erase(rows.begin() + j);
  Allocation x = p.allocation;
  x.choice.erase(x.choice.begin() + j);
  BidProfile base(inst, std::move(rows));
  return MonotonicityProbe{std::move(inst), std::move(base), p.bidder > j ? p.bidder - 1 : p.bidder, p.raised,
                           std::move(x)};
}

std::optional<MonotonicityProbe> without_bundle(const MonotonicityProbe& p, int j, int k) {
  if (p.allocation[j] == k || p.instance.num_bundles(j) <= 1) return std::nullopt;
  if (j == p.bidder && p.raised[static_cast<std::size_t>(k)] != p.base.bid(j, k)) return std::nullopt;
  std::vector<BidderSpec> bidders = p.instance.bidders();
  bidders[static_cast<std::size_t>(j)].bundles.erase(bidders[static_cast<std::size_t>(j)].bundles.begin() + k);
  AuctionInstance inst(p.instance.goods(), std::move(bidders));
  auto rows = p.base.all();
  rows[static_cast<std::size_t>(j)].erase(rows[static_cast<std::size_t>(j)].begin() + k);
  Allocation x = p.allocation;
  if (x.choice[static_cast<std::size_t>(j)] > k) --x.choice[static_cast<std::size_t>(j)];
  std::vector<Rational> raised = p.raised;
  if (j == p.bidder) raised.erase(raised.begin() + k);
  BidProfile base(inst, std::move(rows));
  return MonotonicityProbe{std::move(inst), std::move(base), p.bidder, std::move(raised), std::move(x)};
}

std::optional<MonotonicityProbe> without_good(const MonotonicityProbe& p, int g) {
  if (p.instance.num_goods() <= 1) return std::nullopt;
  MonotonicityProbe cur = p;
  // Drop every bundle that uses the good, last index first so earlier indices stay valid.
  for (int j = 0; j < cur.instance.num_bidders(); ++j) {
    for (int k = cur.instance.num_bundles(j) - 1; k >= 0; --k) {
      if (!cur.instance.bundle(j, k).contains(g)) continue;
      auto next = without_bundle(cur, j, k);
      if (!next) return std::nullopt;
      cur = std::move(*next);
    }
  }
  const std::uint64_t low = (std::uint64_t{1} << g) - 1;
  std::vector<std::string> goods = cur.instance.goods();
  goods.erase(goods.begin() + g);
  std::vector<BidderSpec> bidders = cur.instance.bidders();
  for (auto& spec : bidders) {
    for (auto& k : spec.bundles) k = Bundle((k.mask() & low) | ((k.mask() >> 1) & ~low));
  }
  AuctionInstance inst(std::move(goods), std::move(bidders));
  BidProfile base(inst, cur.base.all());
  return MonotonicityProbe{std::move(inst), std::move(base), cur.bidder, cur.raised, cur.allocation};
}

std::vector<Rational> smaller_values(const Rational& v) {
  std::vector<Rational> out;
  auto add = [&](const Rational& c) {
    if (c.sign() >= 0 && c < v && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  add(Rational{});
  add((v / Rational(2)).floor());
  add(v - Rational(1));
  add(v.floor());
  add(v / Rational(2));
  return out;
}

}  // namespace

ViolationCertificate minimize_certificate(const ViolationCertificate& certificate, const CoreOptions& options) {
  ViolationCertificate best = certificate;
  if (auto again = recheck(best, best.probe, options)) best = *again;
  auto accept = [&](std::optional<MonotonicityProbe> candidate) {
    if (!candidate) return false;
    if (auto cert = recheck(best, std::move(*candidate), options)) {
      best = std::move(*cert);
      return true;
    }
    return false;
  };
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (int j = best.probe.instance.num_bidders() - 1; j >= 0; --j) {
      if (j < best.probe.instance.num_bidders()) changed |= accept(without_bidder(best.probe, j));
    }
    for (int g = best.probe.instance.num_goods() - 1; g >= 0; --g) {
      if (g < best.probe.instance.num_goods()) changed |= accept(without_good(best.probe, g));
    }
    for (int j = 0; j < best.probe.instance.num_bidders(); ++j) {
      for (int k = best.probe.instance.num_bundles(j) - 1; k >= 0; --k) {
        if (k < best.probe.instance.num_bundles(j)) changed |= accept(without_bundle(best.probe, j, k));
      }
    }
    for (int j = 0; j < best.probe.instance.num_bidders(); ++j) {
      for (int k = 0; k < best.probe.instance.num_bundles(j); ++k) {
        const Rational current = best.probe.base.bid(j, k);
        for (const auto& v : smaller_values(current)) {
          MonotonicityProbe p = best.probe;
          p.base.set(j, k, v);
          if (j == p.bidder) {
            // Keep the size of the raise on this coordinate.
            auto& raised = p.raised[static_cast<std::size_t>(k)];
            raised = v + (raised - current);
          }
          if (accept(std::move(p))) {
            changed = true;
            break;
          }
        }
        if (j != best.probe.bidder) continue;
        const Rational delta = best.probe.raised[static_cast<std::size_t>(k)] - best.probe.base.bid(j, k);
        if (delta.sign() == 0) continue;
        for (const auto& d : smaller_values(delta)) {
          if (d.sign() == 0) continue;
          MonotonicityProbe p = best.probe;
          p.raised[static_cast<std::size_t>(k)] = p.base.bid(j, k) + d;
          if (accept(std::move(p))) {
            changed = true;
            break;
          }
        }
      }
    }
    if (!changed) break;
  }
  return best;
}

}  // namespace cabne
