#include "cabne/payments.hpp"

#include <algorithm>
#include <array>

#include "cabne/errors.hpp"
#include "cabne/linear_program.hpp"
#include "cabne/quadratic_program.hpp"

namespace cabne {
namespace {

constexpr std::array<std::pair<PaymentRule, std::string_view>, 5> kRuleNames{{
    {PaymentRule::kFirstPrice, "first-price"},
    {PaymentRule::kVcg, "vcg"},
    {PaymentRule::kVcgNearest, "vcg-nearest"},
    {PaymentRule::kProportional, "proportional"},
    {PaymentRule::kProxy, "proxy"},
}};

std::vector<Rational> winning_bids(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x) {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(instance.num_bidders()));
  for (int i = 0; i < instance.num_bidders(); ++i) out.push_back(bids.bid(i, x[i]));
  return out;
}

void require_valid(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x) {
  if (bids.num_bidders() != instance.num_bidders()) throw InvalidInput("bid profile does not match instance");
  if (!x.valid_for(instance)) throw InvalidInput("allocation is not valid for the instance");
}

std::vector<int> winners_of(const CorePolytope& core) {
  std::vector<int> out;
  for (int i = 0; i < core.num_bidders(); ++i) {
    if (core.upper_bounds[static_cast<std::size_t>(i)].sign() > 0) out.push_back(i);
  }
  return out;
}

}  // namespace

std::string_view rule_name(PaymentRule rule) {
  for (const auto& [r, name] : kRuleNames) {
    if (r == rule) return name;
  }
  return "unknown";
}

PaymentRule parse_rule(std::string_view name) {
  for (const auto& [r, n] : kRuleNames) {
    if (n == name) return r;
  }
  throw InvalidInput("unknown payment rule: " + std::string(name));
}

const std::vector<PaymentRule>& all_rules() {
  static const std::vector<PaymentRule> rules{PaymentRule::kFirstPrice, PaymentRule::kVcg, PaymentRule::kVcgNearest,
                                              PaymentRule::kProportional, PaymentRule::kProxy};
  return rules;
}

Rational PaymentVector::total() const {
  Rational s;
  for (const auto& a : amounts) s += a;
  return s;
}

bool CorePolytope::contains(const PaymentVector& p) const {
  if (static_cast<int>(p.amounts.size()) != num_bidders()) return false;
  for (int i = 0; i < num_bidders(); ++i) {
    if (p[i].sign() < 0 || upper_bounds[static_cast<std::size_t>(i)] < p[i]) return false;
  }
  for (const auto& c : constraints) {
    Rational lhs;
    for (const int j : c.payers.members()) lhs += p[j];
    if (lhs < c.rhs) return false;
  }
  return true;
}

PaymentVector first_price(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x) {
  require_valid(instance, bids, x);
  return PaymentVector{winning_bids(instance, bids, x)};
}

PaymentVector vcg(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                  const WdOptions& options) {
  require_valid(instance, bids, x);
  const int n = instance.num_bidders();
  PaymentVector out{std::vector<Rational>(static_cast<std::size_t>(n))};
  const Rational total = reported_welfare(instance, bids, x);
  for (int i = 0; i < n; ++i) {
    if (x[i] == kNoBundle) continue;
    const BidderSet others = instance.all_bidders().without(i);
    const Rational without_i = others.empty() ? Rational{} : coalition_welfare(instance, others, bids, options);
    out.amounts[static_cast<std::size_t>(i)] = without_i - (total - bids.bid(i, x[i]));
  }
  return out;
}

CorePolytope core_constraints(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                              const CoreOptions& options) {
  require_valid(instance, bids, x);
  const int n = instance.num_bidders();
  const std::uint64_t count = std::uint64_t{1} << n;
  if (count > options.coalition_budget) {
    throw BudgetExceeded("core constraints need 2^" + std::to_string(n) + " coalitions, above the configured budget");
  }
  CorePolytope core;
  core.upper_bounds = winning_bids(instance, bids, x);
  for (std::uint64_t mask = 1; mask + 1 < count; ++mask) {
    const BidderSet coalition(mask);
    const Rational rhs = coalition_welfare(instance, coalition, bids, options.wd) -
                         reported_welfare(instance, bids, x, coalition);
    if (rhs.sign() <= 0 && !options.keep_vacuous) continue;
    core.constraints.push_back(CoreConstraint{coalition, coalition.complement(n), rhs});
  }
  return core;
}

namespace {

/// Dual of min sum p s.t. core rows, p <= u, p >= 0, restricted to winners:
///   max sum rhs_L y_L - sum u_i z_i  s.t.  sum_{L : i pays} y_L - z_i <= 1.
/// The origin is feasible, so no phase one is needed; the primal point is the dual of this LP.
LpSolution solve_min_revenue(const CorePolytope& core, const std::vector<int>& winners) {
  const std::size_t w = winners.size();
  const std::size_t k = core.constraints.size();
  LinearProgram lp;
  lp.a.assign(w, std::vector<Rational>(k + w));
  lp.b.assign(w, Rational{1});
  lp.c.resize(k + w);
  for (std::size_t l = 0; l < k; ++l) {
    const auto& c = core.constraints[l];
    lp.c[l] = c.rhs;
    for (std::size_t r = 0; r < w; ++r) {
      if (c.payers.contains(winners[r])) lp.a[r][l] = 1;
    }
  }
  for (std::size_t r = 0; r < w; ++r) {
    lp.a[r][k + r] = -1;
    lp.c[k + r] = -core.upper_bounds[static_cast<std::size_t>(winners[r])];
  }
  LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::kOptimal) throw Error("core is empty; the allocation is not efficient for these bids");
  return sol;
}

}  // namespace

Rational min_revenue(const CorePolytope& core) {
  const auto winners = winners_of(core);
  for (const auto& c : core.constraints) {
    if (c.rhs.sign() > 0 && winners.empty()) throw Error("core is empty; the allocation is not efficient for these bids");
  }
  if (winners.empty()) return Rational{};
  return solve_min_revenue(core, winners).objective;
}

PaymentVector min_revenue_point(const CorePolytope& core) {
  PaymentVector out{std::vector<Rational>(static_cast<std::size_t>(core.num_bidders()))};
  const auto winners = winners_of(core);
  if (winners.empty()) return out;
  const LpSolution sol = solve_min_revenue(core, winners);
  for (std::size_t r = 0; r < winners.size(); ++r) out.amounts[static_cast<std::size_t>(winners[r])] = sol.duals[r];
  return out;
}

PaymentVector vcg_nearest(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                          const CoreOptions& options) {
  const CorePolytope core = core_constraints(instance, bids, x, options);
  const PaymentVector reference = vcg(instance, bids, x, options.wd);
  const auto winners = winners_of(core);
  PaymentVector out{std::vector<Rational>(static_cast<std::size_t>(instance.num_bidders()))};
  if (winners.empty()) return out;

  const PaymentVector start = min_revenue_point(core);
  Rational revenue = start.total();
  const std::size_t w = winners.size();

  ProjectionProblem qp;
  for (const int i : winners) qp.target.push_back(reference[i]);
  for (const auto& c : core.constraints) {
    std::vector<Rational> row(w);
    for (std::size_t r = 0; r < w; ++r) {
      if (c.payers.contains(winners[r])) row[r] = 1;
    }
    qp.inequality_lhs.push_back(std::move(row));
    qp.inequality_rhs.push_back(c.rhs);
  }
  for (std::size_t r = 0; r < w; ++r) {
    std::vector<Rational> lower(w);
    lower[r] = 1;
    qp.inequality_lhs.push_back(lower);
    qp.inequality_rhs.emplace_back();
    std::vector<Rational> upper(w);
    upper[r] = -1;
    qp.inequality_lhs.push_back(std::move(upper));
    qp.inequality_rhs.push_back(-core.upper_bounds[static_cast<std::size_t>(winners[r])]);
  }
  qp.equality_lhs.push_back(std::vector<Rational>(w, Rational{1}));
  qp.equality_rhs.push_back(std::move(revenue));

  std::vector<Rational> p0;
  for (const int i : winners) p0.push_back(start[i]);
  const auto p = project_onto_polyhedron(qp, std::move(p0));
  for (std::size_t r = 0; r < w; ++r) out.amounts[static_cast<std::size_t>(winners[r])] = p[r];
  return out;
}

Rational proportional_scale(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                            const CorePolytope& core) {
  const auto b = winning_bids(instance, bids, x);
  Rational alpha;
  for (const auto& c : core.constraints) {
    if (c.rhs.sign() <= 0) continue;
    Rational denom;
    for (const int j : c.payers.members()) denom += b[static_cast<std::size_t>(j)];
    if (denom.is_zero()) throw InfeasibleForm("a binding core constraint has no winning bids among its payers");
    alpha = max(alpha, c.rhs / denom);
  }
  if (Rational{1} < alpha) throw InfeasibleForm("proportional scale exceeds 1, violating individual rationality");
  return alpha;
}

PaymentVector proportional(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                           const CoreOptions& options) {
  const CorePolytope core = core_constraints(instance, bids, x, options);
  const Rational alpha = proportional_scale(instance, bids, x, core);
  PaymentVector out{winning_bids(instance, bids, x)};
  for (auto& a : out.amounts) a *= alpha;
  return out;
}

Rational proxy_cap(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                   const CorePolytope& core) {
  const auto b = winning_bids(instance, bids, x);
  Rational alpha;
  std::vector<Rational> caps;
  for (const auto& c : core.constraints) {
    if (c.rhs.sign() <= 0) continue;
    caps.clear();
    for (const int j : c.payers.members()) caps.push_back(b[static_cast<std::size_t>(j)]);
    std::sort(caps.begin(), caps.end());
    // On [caps[t-1], caps[t]] the left-hand side is prefix + alpha * (k - t).
    const std::size_t k = caps.size();
    Rational prefix;
    bool met = false;
    for (std::size_t t = 0; t < k; ++t) {
      const Rational at_next = prefix + caps[t] * Rational(static_cast<std::int64_t>(k - t));
      if (!(at_next < c.rhs)) {
        alpha = max(alpha, (c.rhs - prefix) / Rational(static_cast<std::int64_t>(k - t)));
        met = true;
        break;
      }
      prefix += caps[t];
    }
    if (!met) throw InfeasibleForm("no proxy cap satisfies a core constraint");
  }
  return alpha;
}

PaymentVector proxy(const AuctionInstance& instance, const BidProfile& bids, const Allocation& x,
                    const CoreOptions& options) {
  const CorePolytope core = core_constraints(instance, bids, x, options);
  const Rational alpha = proxy_cap(instance, bids, x, core);
  PaymentVector out{winning_bids(instance, bids, x)};
  for (auto& a : out.amounts) a = min(a, alpha);
  return out;
}

PaymentVector compute_payments(PaymentRule rule, const AuctionInstance& instance, const BidProfile& bids,
                               const Allocation& x, const CoreOptions& options) {
  switch (rule) {
    case PaymentRule::kFirstPrice:
      return first_price(instance, bids, x);
    case PaymentRule::kVcg:
      return vcg(instance, bids, x, options.wd);
    case PaymentRule::kVcgNearest:
      return vcg_nearest(instance, bids, x, options);
    case PaymentRule::kProportional:
      return proportional(instance, bids, x, options);
    case PaymentRule::kProxy:
      return proxy(instance, bids, x, options);
  }
  throw InvalidInput("unknown payment rule");
}

}  // namespace cabne
