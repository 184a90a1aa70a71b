#include "cabne/auction.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "cabne/errors.hpp"

namespace cabne {

std::vector<int> BidderSet::members() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

AuctionInstance::AuctionInstance(std::vector<std::string> goods, std::vector<BidderSpec> bidders)
    : goods_(std::move(goods)), bidders_(std::move(bidders)) {
  if (goods_.empty()) throw InvalidInput("auction needs at least one good");
  if (bidders_.empty()) throw InvalidInput("auction needs at least one bidder");
  if (goods_.size() > kMaxGoods) throw InvalidInput("too many goods (max 64)");
  if (bidders_.size() > kMaxBidders) throw InvalidInput("too many bidders (max 63)");
  std::set<std::string> good_names(goods_.begin(), goods_.end());
  if (good_names.size() != goods_.size()) throw InvalidInput("duplicate good identifier");
  std::set<std::string> ids;
  const Bundle everything = all_goods();
  for (const auto& b : bidders_) {
    if (!ids.insert(b.id).second) throw InvalidInput("duplicate bidder id: " + b.id);
    std::set<std::uint64_t> seen;
    for (const Bundle k : b.bundles) {
      if (k.empty()) throw InvalidInput("bidder " + b.id + " has an empty bundle of interest");
      if (!k.subset_of(everything)) throw InvalidInput("bidder " + b.id + " bundle uses undeclared goods");
      if (!seen.insert(k.mask()).second) throw InvalidInput("bidder " + b.id + " repeats a bundle of interest");
    }
  }
}

AuctionInstance AuctionInstance::from_names(
    std::vector<std::string> goods,
    const std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>& bidders) {
  std::vector<BidderSpec> specs;
  for (const auto& [id, bundles] : bidders) {
    BidderSpec spec{id, {}};
    for (const auto& names : bundles) {
      std::uint64_t mask = 0;
      for (const auto& name : names) {
        const auto it = std::find(goods.begin(), goods.end(), name);
        if (it == goods.end()) throw InvalidInput("unknown good: " + name);
        mask |= std::uint64_t{1} << (it - goods.begin());
      }
      spec.bundles.emplace_back(mask);
    }
    specs.push_back(std::move(spec));
  }
  return AuctionInstance(std::move(goods), std::move(specs));
}

Bundle AuctionInstance::bundle(int i, int k) const {
  if (k == kNoBundle) return Bundle{};
  return bidder(i).bundles.at(static_cast<std::size_t>(k));
}

Bundle AuctionInstance::all_goods() const {
  const int m = num_goods();
  return Bundle(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
}

int AuctionInstance::max_bundles() const {
  int r = 0;
  for (const auto& b : bidders_) r = std::max(r, static_cast<int>(b.bundles.size()));
  return r;
}

int AuctionInstance::bidder_index(std::string_view id) const {
  for (int i = 0; i < num_bidders(); ++i) {
    if (bidders_[static_cast<std::size_t>(i)].id == id) return i;
  }
  throw InvalidInput("unknown bidder: " + std::string(id));
}

int AuctionInstance::good_index(std::string_view name) const {
  for (int g = 0; g < num_goods(); ++g) {
    if (goods_[static_cast<std::size_t>(g)] == name) return g;
  }
  throw InvalidInput("unknown good: " + std::string(name));
}

Bundle AuctionInstance::bundle_from_names(const std::vector<std::string>& names) const {
  std::uint64_t mask = 0;
  for (const auto& name : names) mask |= std::uint64_t{1} << good_index(name);
  return Bundle(mask);
}

std::vector<std::string> AuctionInstance::bundle_names(Bundle bundle) const {
  std::vector<std::string> out;
  for (int g = 0; g < num_goods(); ++g) {
    if (bundle.contains(g)) out.push_back(goods_[static_cast<std::size_t>(g)]);
  }
  return out;
}

std::string AuctionInstance::bundle_label(Bundle bundle) const {
  std::string out = "{";
  bool first = true;
  for (const auto& name : bundle_names(bundle)) {
    if (!first) out += ",";
    out += name;
    first = false;
  }
  return out + "}";
}

bool operator==(const AuctionInstance& a, const AuctionInstance& b) {
  if (a.goods_ != b.goods_ || a.bidders_.size() != b.bidders_.size()) return false;
  for (std::size_t i = 0; i < a.bidders_.size(); ++i) {
    if (a.bidders_[i].id != b.bidders_[i].id || a.bidders_[i].bundles != b.bidders_[i].bundles) return false;
  }
  return true;
}

BidProfile::BidProfile(const AuctionInstance& instance, std::vector<std::vector<Rational>> bids)
    : bids_(std::move(bids)) {
  if (static_cast<int>(bids_.size()) != instance.num_bidders()) throw InvalidInput("bid profile has wrong bidder count");
  for (int i = 0; i < instance.num_bidders(); ++i) {
    const auto& row = bids_[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != instance.num_bundles(i)) {
      throw InvalidInput("bid profile has wrong bundle count for bidder " + instance.bidder(i).id);
    }
    for (const auto& amount : row) {
      if (amount.sign() < 0) throw InvalidInput("negative bid for bidder " + instance.bidder(i).id);
    }
  }
}

BidProfile BidProfile::zeros(const AuctionInstance& instance) {
  std::vector<std::vector<Rational>> bids;
  for (int i = 0; i < instance.num_bidders(); ++i) {
    bids.emplace_back(static_cast<std::size_t>(instance.num_bundles(i)), Rational{});
  }
  return BidProfile(instance, std::move(bids));
}

const Rational& BidProfile::bid(int i, int k) const {
  static const Rational kZero{};
  if (k == kNoBundle) return kZero;
  return bids_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k));
}

void BidProfile::set(int i, int k, Rational amount) {
  if (amount.sign() < 0) throw InvalidInput("negative bid");
  bids_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)) = std::move(amount);
}

void BidProfile::set_bids_of(int i, std::vector<Rational> amounts) {
  auto& row = bids_.at(static_cast<std::size_t>(i));
  if (amounts.size() != row.size()) throw InvalidInput("bid vector has wrong length");
  for (const auto& a : amounts) {
    if (a.sign() < 0) throw InvalidInput("negative bid");
  }
  row = std::move(amounts);
}

BidderSet Allocation::winners() const {
  BidderSet out;
  for (int i = 0; i < num_bidders(); ++i) {
    if (choice[static_cast<std::size_t>(i)] != kNoBundle) out = out.with(i);
  }
  return out;
}

bool Allocation::valid_for(const AuctionInstance& instance) const {
  if (num_bidders() != instance.num_bidders()) return false;
  std::uint64_t used = 0;
  for (int i = 0; i < num_bidders(); ++i) {
    const int k = choice[static_cast<std::size_t>(i)];
    if (k == kNoBundle) continue;
    if (k < 0 || k >= instance.num_bundles(i)) return false;
    const std::uint64_t mask = instance.bundle(i, k).mask();
    if ((used & mask) != 0) return false;
    used |= mask;
  }
  return true;
}

Rational reported_welfare(const AuctionInstance& instance, const BidProfile& bids, const Allocation& allocation,
                          BidderSet subset) {
  Rational total;
  for (int i = 0; i < instance.num_bidders(); ++i) {
    if (subset.contains(i)) total += bids.bid(i, allocation[i]);
  }
  return total;
}

Rational reported_welfare(const AuctionInstance& instance, const BidProfile& bids, const Allocation& allocation) {
  return reported_welfare(instance, bids, allocation, instance.all_bidders());
}

namespace {

struct Option {
  int index;
  std::uint64_t mask;
  Rational bid;
};

/// Depth-first branch and bound over per-bidder choices. Each participant either takes one
/// of its allocatable bundles or nothing; the bound is the sum of the best remaining bids.
class WdSearch {
 public:
  WdSearch(const AuctionInstance& instance, const BidProfile& bids, BidderSet participants, std::uint64_t available,
           const WdOptions& options, bool collect)
      : collect_(collect), budget_(options.node_budget) {
    if (bids.num_bidders() != instance.num_bidders()) throw InvalidInput("bid profile does not match instance");
    choice_.assign(static_cast<std::size_t>(instance.num_bidders()), kNoBundle);
    for (const int i : participants.members()) {
      if (i >= instance.num_bidders()) throw InvalidInput("bidder index out of range");
      std::vector<Option> options_i;
      const bool zero_ok = options.zero_bid_eligible.contains(i);
      for (int k = 0; k < instance.num_bundles(i); ++k) {
        const Rational& amount = bids.bid(i, k);
        const std::uint64_t mask = instance.bundle(i, k).mask();
        if ((mask & ~available) != 0) continue;
        if (amount.sign() > 0 || (zero_ok && amount.is_zero())) options_i.push_back({k, mask, amount});
      }
      if (options_i.empty()) continue;
      std::stable_sort(options_i.begin(), options_i.end(), [](const Option& a, const Option& b) { return b.bid < a.bid; });
      order_.push_back(i);
      options_.push_back(std::move(options_i));
    }
    suffix_.assign(order_.size() + 1, Rational{});
    for (std::size_t d = order_.size(); d-- > 0;) suffix_[d] = suffix_[d + 1] + options_[d].front().bid;
  }

  void run() { descend(0, 0, Rational{}); }

  [[nodiscard]] const Rational& best() const { return *best_; }
  [[nodiscard]] std::vector<Allocation>& found() { return found_; }

 private:
  void descend(std::size_t depth, std::uint64_t used, const Rational& welfare) {
    if (++nodes_ > budget_) throw BudgetExceeded("winner determination exceeded node budget of " + std::to_string(budget_));
    if (best_) {
      const Rational bound = welfare + suffix_[depth];
      if (collect_ ? bound < *best_ : bound <= *best_) return;
    }
    if (depth == order_.size()) {
      if (!best_ || *best_ < welfare) {
        best_ = welfare;
        found_.clear();
      }
      if (collect_) found_.push_back(Allocation{choice_});
      return;
    }
    const int bidder = order_[depth];
    for (const Option& opt : options_[depth]) {
      if ((used & opt.mask) != 0) continue;
      choice_[static_cast<std::size_t>(bidder)] = opt.index;
      descend(depth + 1, used | opt.mask, welfare + opt.bid);
    }
    choice_[static_cast<std::size_t>(bidder)] = kNoBundle;
    descend(depth + 1, used, welfare);
  }

  bool collect_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<int> order_;
  std::vector<std::vector<Option>> options_;
  std::vector<Rational> suffix_;
  std::vector<int> choice_;
  std::optional<Rational> best_;
  std::vector<Allocation> found_;
};

WdResult run_search(const AuctionInstance& instance, const BidProfile& bids, BidderSet participants,
                    std::uint64_t available, const WdOptions& options) {
  WdSearch search(instance, bids, participants, available, options, true);
  search.run();
  WdResult result{search.best(), std::move(search.found())};
  std::sort(result.allocations.begin(), result.allocations.end());
  return result;
}

}  // namespace

WdResult winner_determination(const AuctionInstance& instance, const BidProfile& bids, const WdOptions& options) {
  return run_search(instance, bids, instance.all_bidders(), instance.all_goods().mask(), options);
}

WdResult constrained_winner_determination(const AuctionInstance& instance, int bidder, int bundle,
                                          const BidProfile& bids, const WdOptions& options) {
  if (bidder < 0 || bidder >= instance.num_bidders()) throw InvalidInput("bidder index out of range");
  if (bundle != kNoBundle && (bundle < 0 || bundle >= instance.num_bundles(bidder))) {
    throw PreconditionViolation("constrained bundle is not one of the bidder's bundles of interest");
  }
  const Bundle fixed = instance.bundle(bidder, bundle);
  WdResult result = run_search(instance, bids, instance.all_bidders().without(bidder),
                               instance.all_goods().without(fixed).mask(), options);
  for (auto& x : result.allocations) x.choice[static_cast<std::size_t>(bidder)] = bundle;
  return result;
}

WdResult coalition_winner_determination(const AuctionInstance& instance, BidderSet coalition, const BidProfile& bids,
                                        const WdOptions& options) {
  if (coalition.empty()) throw PreconditionViolation("coalition must be non-empty");
  return run_search(instance, bids, coalition, instance.all_goods().mask(), options);
}

Rational coalition_welfare(const AuctionInstance& instance, BidderSet coalition, const BidProfile& bids,
                           const WdOptions& options) {
  WdSearch search(instance, bids, coalition, instance.all_goods().mask(), options, false);
  search.run();
  return search.best();
}

}  // namespace cabne
